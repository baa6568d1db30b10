//! Monte Carlo engine for the two-dealer market.

mod params;
mod series;
mod sim;
mod trend;
mod window;

pub use params::{SimParams, Trend};
pub use series::{fmt_decimal, TickRecord, TickSeries, CSV_HEADER};
pub use sim::{run, Representation, SimState};
pub use trend::{weighted_ma, ChangeHistory};
pub use window::{modulated_c, noise_for_mean_interval, IntervalWindow};
