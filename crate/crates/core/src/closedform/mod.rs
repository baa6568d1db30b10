//! Exact laws of the plain model and the trend-following relations.

mod law;
pub mod quad;
mod solve;
mod special;

pub use law::{ClosedFormLaw, MomentKind, Which};
pub use solve::{solve_tail_exponent, solve_trend_coefficient, BETA_BRACKET};
pub use special::{dirichlet_beta, euler_number, max_euler_index, CATALAN};

use crate::{Error, Result};

/// Market-potential view of a trend-following market.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PuckParams {
    pub d: f64,
    /// Mean potential coefficient `<b>`; `> 0` is a stable market.
    pub b_mean: f64,
    pub ma_depth: usize,
}

impl PuckParams {
    pub fn from_trend(d: f64, ma_depth: usize, law: &ClosedFormLaw) -> Self {
        PuckParams {
            d,
            b_mean: puck_b_mean(d, law),
            ma_depth,
        }
    }

    /// Coefficient `a` of the quadratic potential `U(x) = a x²` with
    /// `U = b/(2M) x²`.
    pub fn quadratic_coefficient(&self) -> f64 {
        self.b_mean / (2.0 * self.ma_depth as f64)
    }
}

/// `<b> = -2d<I> = -d (L/c)²`.
pub fn puck_b_mean(d: f64, law: &ClosedFormLaw) -> f64 {
    -d * (law.spread / law.noise).powi(2)
}

/// Trend coefficient at which price diffusion diverges, `2c²/L²`.
pub fn bubble_threshold(law: &ClosedFormLaw) -> f64 {
    2.0 * (law.noise / law.spread).powi(2)
}

/// `σ_d / σ_{d=0} = 2c² / (2c² - d L²)` for `d` below the bubble threshold.
pub fn diffusion_ratio(d: f64, law: &ClosedFormLaw) -> Result<f64> {
    let bound = bubble_threshold(law);
    if d >= bound {
        return Err(Error::BubbleRegime { d, bound });
    }
    let c2 = 2.0 * law.noise * law.noise;
    Ok(c2 / (c2 - d * law.spread * law.spread))
}
