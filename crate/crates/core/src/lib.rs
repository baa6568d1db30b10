//! Two-dealer stochastic market models.
//!
//! Three layers:
//!
//! - [`engine`]: Monte Carlo simulation of the two-dealer market, either as
//!   two dealer mid-prices or as the reduced (D, ΔG) random walk with
//!   absorbing walls at `|D| = L`. Supports the plain model, self-modulated
//!   noise amplitude, moving-average trend following, and their combination.
//! - [`closedform`]: exact laws of the plain model (interval and price-change
//!   distributions, moments via Euler numbers and the Dirichlet beta function,
//!   tail rates), the power-law exponent solver and the market-potential
//!   relations.
//! - [`stats`]: estimators that recover those laws from simulated tick series.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod closedform;
pub mod engine;
mod error;
pub mod stats;

pub use closedform::{ClosedFormLaw, PuckParams};
pub use engine::{run, Representation, SimParams, SimState, TickRecord, TickSeries, Trend};
pub use error::{Error, Result};
