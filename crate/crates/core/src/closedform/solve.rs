//! Power-law exponent of price changes under trend following.
//!
//! With `M = 1` the price change obeys `ΔP(n+1) = d·I·ΔP(n) + F`, a random
//! multiplicative process whose stationary tail `P(|ΔP| > x) ~ x^(-β)` has
//! `β` fixed by `|d|^β <I^β> = 1`.

use super::law::ClosedFormLaw;
use crate::{Error, Result};

pub const BETA_BRACKET: (f64, f64) = (1e-6, 64.0);
const TOL: f64 = 1e-10;

/// `|d|` such that `|d|^β <I^β> = 1`.
pub fn solve_trend_coefficient(beta: f64, law: &ClosedFormLaw) -> Result<f64> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::Domain(format!("exponent must be > 0, got {beta}")));
    }
    let m = law.interval_moment_real(beta)?;
    let d = m.powf(-1.0 / beta);
    if !(d.is_finite() && d > 0.0) {
        return Err(Error::Numerical(format!(
            "no positive root: <I^{beta}> = {m:e} gives |d| = {d}"
        )));
    }
    Ok(d)
}

/// Tail exponent `β` of `|ΔP|` for trend coefficient `d`.
///
/// `g(β) = β ln|d| + ln <I^β>` is convex with `g(0) = 0`, so a root in the
/// bracket exists iff `g < 0` at the lower end and `g > 0` at the upper end.
pub fn solve_tail_exponent(d: f64, law: &ClosedFormLaw) -> Result<f64> {
    if !(d != 0.0 && d.is_finite()) {
        return Err(Error::Domain(format!(
            "|d| must be positive and finite, got {d}"
        )));
    }
    let ln_d = d.abs().ln();
    let g = |beta: f64| -> Result<f64> { Ok(beta * ln_d + law.interval_moment_real(beta)?.ln()) };
    let (mut lo, mut hi) = BETA_BRACKET;
    let mut g_lo = g(lo)?;
    let mut g_hi = g(hi)?;
    if !(g_lo < 0.0 && g_hi > 0.0) {
        return Err(Error::Numerical(format!(
            "no exponent in ({lo}, {hi}] for d = {d}: g(lo) = {g_lo:e}, g(hi) = {g_hi:e}"
        )));
    }
    // Bisection safeguarded secant.
    for _ in 0..200 {
        let width = hi - lo;
        if width < TOL {
            break;
        }
        let secant = lo - g_lo * (hi - lo) / (g_hi - g_lo);
        let mid = 0.5 * (lo + hi);
        let trial = if secant > lo + 0.01 * width && secant < hi - 0.01 * width {
            secant
        } else {
            mid
        };
        let gt = g(trial)?;
        if gt == 0.0 {
            return Ok(trial);
        }
        if gt < 0.0 {
            lo = trial;
            g_lo = gt;
        } else {
            hi = trial;
            g_hi = gt;
        }
        // A secant step that only nudges one end is followed by a bisection.
        if hi - lo > 0.5 * width {
            let gm = g(mid)?;
            if gm < 0.0 {
                lo = mid.max(lo);
                g_lo = gm;
            } else {
                hi = mid.min(hi);
                g_hi = gm;
            }
        }
    }
    Ok(0.5 * (lo + hi))
}
