//! Estimators over tick series.

mod diffusion;
mod dist;
mod puck;
mod tails;

pub use diffusion::{diffusion_sigma, sigma_ratio};
pub use dist::{empirical_ccdf, EmpiricalCcdf, Histogram, Moments};
pub use puck::{
    e_series, potential_curve, puck_slope, PotentialFit, PotentialOptions, PuckSlope, Symmetry,
};
pub use tails::{fit_exponential_rate, hill_tail_exponent, loglog_ccdf_slope, HillEstimate};

/// Lags at which the long-time diffusion ratio is evaluated.
pub const SIGMA_RATIO_LAGS: [usize; 3] = [64, 128, 256];
