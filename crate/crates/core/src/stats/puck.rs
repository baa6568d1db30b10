//! Self-modulation factors and market-potential estimators.

use super::dist::quantile_sorted;
use super::tails::ols_slope;
use crate::engine::{weighted_ma, IntervalWindow, TickRecord};
use crate::{Error, Result};

/// `e(n) = I(n) / <I>_τ`, with the window mean taken exactly as the engine's
/// self-modulation takes it (the window includes `I(n)`).
pub fn e_series(ticks: &[TickRecord], tau: f64) -> Vec<f64> {
    let mut w = IntervalWindow::new(tau);
    ticks
        .iter()
        .map(|r| r.interval / w.push(r.t, r.interval))
        .collect()
}

/// Regression of `ΔP(n+1)` on the weighted moving average `<ΔP>_M` at `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PuckSlope {
    pub slope: f64,
    pub intercept: f64,
    pub std_err: f64,
    pub samples: usize,
    /// Potential coefficient `b = -2·slope`.
    pub b_est: f64,
}

pub fn puck_slope(ticks: &[TickRecord], ma_depth: usize) -> Result<PuckSlope> {
    if ma_depth < 1 {
        return Err(Error::Config("M must be at least 1".into()));
    }
    if ticks.len() < ma_depth + 50 {
        return Err(Error::Data(format!(
            "PUCK slope needs at least M + 50 = {} ticks, got {}",
            ma_depth + 50,
            ticks.len()
        )));
    }
    let dp: Vec<f64> = ticks.iter().map(|r| r.dprice).collect();
    let mut recent = Vec::with_capacity(ma_depth);
    let mut xs = Vec::with_capacity(dp.len());
    let mut ys = Vec::with_capacity(dp.len());
    for n in ma_depth - 1..dp.len() - 1 {
        recent.clear();
        recent.extend((0..ma_depth).map(|k| dp[n - k]));
        xs.push(weighted_ma(&recent)?);
        ys.push(dp[n + 1]);
    }
    let (slope, intercept) = ols_slope(&xs, &ys)
        .ok_or_else(|| Error::Data("moving average of price changes has zero variance".into()))?;
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let rss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let r = y - intercept - slope * x;
            r * r
        })
        .sum();
    Ok(PuckSlope {
        slope,
        intercept,
        std_err: (rss / (m - 2.0) / sxx).sqrt(),
        samples: xs.len(),
        b_est: -2.0 * slope,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    /// One quadratic for both signs of `x`.
    Symmetric,
    /// Separate quadratics for `x < 0` and `x >= 0`.
    TwoSided,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialOptions {
    pub bins: usize,
    pub min_count: usize,
    /// Fraction of `x` values trimmed from each end before binning.
    pub trim: f64,
    pub symmetry: Symmetry,
}

impl Default for PotentialOptions {
    fn default() -> Self {
        PotentialOptions {
            bins: 10,
            min_count: 20,
            trim: 0.01,
            symmetry: Symmetry::Symmetric,
        }
    }
}

/// Binned conditional drift and fitted quadratic potential.
///
/// `x(n) = P(n) - P_{M+1}(n)` is the distance from the simple `(M+1)`-tick
/// moving average. The potential is `U(x) = -∫₀ˣ E[ΔP(n+1) | x] dx`, anchored
/// at `U(0) = 0`. The quadratic `U = a x²` is fitted through its derivative,
/// `E[ΔP(n+1) | x] = -2a x`, by count-weighted least squares over bins.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialFit {
    /// Mean `x` of each retained bin.
    pub centers: Vec<f64>,
    pub mean_dp: Vec<f64>,
    pub counts: Vec<usize>,
    /// Integrated potential at each center.
    pub potential: Vec<f64>,
    pub a_left: f64,
    pub a_right: f64,
    /// Standard errors of `a_left`, `a_right`.
    pub se_left: f64,
    pub se_right: f64,
    /// Joint fit over both sides.
    pub a: f64,
    pub se: f64,
    pub ma_depth: usize,
    /// `b = 2M·a` from the joint fit.
    pub b_est: f64,
}

impl PotentialFit {
    /// Three standard errors of the joint coefficient.
    pub fn noise_floor(&self) -> f64 {
        3.0 * self.se
    }

    pub fn fitted(&self, x: f64) -> f64 {
        if x < 0.0 {
            self.a_left * x * x
        } else {
            self.a_right * x * x
        }
    }
}

struct SideFit {
    a: f64,
    se: f64,
}

/// Weighted fit of `m = -2a x` through the origin over bins, with the
/// standard error from the per-sample residuals in those bins.
fn fit_side(points: &[(f64, f64)], bins: &[(f64, f64, usize)]) -> Option<SideFit> {
    let (num, den) = bins.iter().fold((0.0, 0.0), |(n, d), &(x, m, c)| {
        (n + c as f64 * m * x, d + c as f64 * x * x)
    });
    if den <= 0.0 || points.len() < 3 {
        return None;
    }
    let a = -num / (2.0 * den);
    let sxx: f64 = points.iter().map(|(x, _)| x * x).sum();
    let rss: f64 = points
        .iter()
        .map(|(x, y)| {
            let r = y + 2.0 * a * x;
            r * r
        })
        .sum();
    let se = (rss / (points.len() as f64 - 1.0) / sxx).sqrt() / 2.0;
    Some(SideFit { a, se })
}

/// Market potential over the last `window` ticks.
pub fn potential_curve(
    ticks: &[TickRecord],
    p0: f64,
    ma_depth: usize,
    window: usize,
    opts: &PotentialOptions,
) -> Result<PotentialFit> {
    if ma_depth < 1 {
        return Err(Error::Config("M must be at least 1".into()));
    }
    if window > ticks.len() {
        return Err(Error::Data(format!(
            "window of {window} ticks exceeds series length {}",
            ticks.len()
        )));
    }
    if opts.bins == 0 || !(0.0..0.5).contains(&opts.trim) {
        return Err(Error::Config(
            "potential binning options out of range".into(),
        ));
    }
    // prices[j] = P(j), prices[0] = p0
    let prices: Vec<f64> = std::iter::once(p0)
        .chain(ticks.iter().map(|r| r.price))
        .collect();
    let last = prices.len() - 1;
    let first = (last + 1).saturating_sub(window).max(ma_depth);
    let mut samples = Vec::new();
    for j in first..last {
        let ma = prices[j - ma_depth..=j].iter().sum::<f64>() / (ma_depth + 1) as f64;
        samples.push((prices[j] - ma, prices[j + 1] - prices[j]));
    }
    if samples.len() < opts.min_count {
        return Err(Error::Data(format!(
            "{} samples in window, need at least {}",
            samples.len(),
            opts.min_count
        )));
    }

    let mut xs: Vec<f64> = samples.iter().map(|s| s.0).collect();
    xs.sort_by(f64::total_cmp);
    let lo = quantile_sorted(&xs, opts.trim);
    let hi = quantile_sorted(&xs, 1.0 - opts.trim);
    if !(hi > lo) {
        return Err(Error::Data(
            "no spread in distance from moving average".into(),
        ));
    }
    let width = (hi - lo) / opts.bins as f64;
    let mut sx = vec![0.0; opts.bins];
    let mut sy = vec![0.0; opts.bins];
    let mut cnt = vec![0usize; opts.bins];
    let mut member = vec![None; samples.len()];
    for (i, &(x, y)) in samples.iter().enumerate() {
        if x < lo || x > hi {
            continue;
        }
        let b = (((x - lo) / width) as usize).min(opts.bins - 1);
        sx[b] += x;
        sy[b] += y;
        cnt[b] += 1;
        member[i] = Some(b);
    }
    let keep: Vec<bool> = cnt.iter().map(|&c| c >= opts.min_count).collect();
    if !keep.iter().any(|&k| k) {
        return Err(Error::Data(format!(
            "no bin reaches {} samples",
            opts.min_count
        )));
    }
    let bins: Vec<(f64, f64, usize)> = (0..opts.bins)
        .filter(|&b| keep[b])
        .map(|b| (sx[b] / cnt[b] as f64, sy[b] / cnt[b] as f64, cnt[b]))
        .collect();
    let used: Vec<(f64, f64)> = samples
        .iter()
        .zip(&member)
        .filter(|(_, m)| m.is_some_and(|b| keep[b]))
        .map(|(s, _)| *s)
        .collect();

    let joint =
        fit_side(&used, &bins).ok_or_else(|| Error::Data("potential fit is degenerate".into()))?;
    let (left, right) = match opts.symmetry {
        Symmetry::Symmetric => ((joint.a, joint.se), (joint.a, joint.se)),
        Symmetry::TwoSided => {
            let side = |neg: bool| -> Result<(f64, f64)> {
                let pts: Vec<_> = used
                    .iter()
                    .copied()
                    .filter(|p| (p.0 < 0.0) == neg)
                    .collect();
                let bs: Vec<_> = bins
                    .iter()
                    .copied()
                    .filter(|b| (b.0 < 0.0) == neg)
                    .collect();
                fit_side(&pts, &bs)
                    .map(|f| (f.a, f.se))
                    .ok_or_else(|| Error::Data("too few occupied bins on one side".into()))
            };
            (side(true)?, side(false)?)
        }
    };

    let potential = integrate_drift(&bins);
    Ok(PotentialFit {
        centers: bins.iter().map(|b| b.0).collect(),
        mean_dp: bins.iter().map(|b| b.1).collect(),
        counts: bins.iter().map(|b| b.2).collect(),
        potential,
        a_left: left.0,
        a_right: right.0,
        se_left: left.1,
        se_right: right.1,
        a: joint.a,
        se: joint.se,
        ma_depth,
        b_est: 2.0 * ma_depth as f64 * joint.a,
    })
}

/// `U(x_b) = -∫₀^{x_b} m(x) dx` by the trapezoid rule through the bin
/// points, with `m(0)` interpolated from the neighbouring bins.
fn integrate_drift(bins: &[(f64, f64, usize)]) -> Vec<f64> {
    let pts: Vec<(f64, f64)> = bins.iter().map(|b| (b.0, b.1)).collect();
    let split = pts.partition_point(|p| p.0 < 0.0);
    let m0 = match (split.checked_sub(1).map(|i| pts[i]), pts.get(split)) {
        (Some((xl, ml)), Some(&(xr, mr))) => ml + (mr - ml) * (0.0 - xl) / (xr - xl),
        (Some((_, m)), None) | (None, Some(&(_, m))) => m,
        (None, None) => 0.0,
    };
    let mut out = vec![0.0; pts.len()];
    let (mut x, mut m, mut u) = (0.0, m0, 0.0);
    for i in split..pts.len() {
        u -= 0.5 * (m + pts[i].1) * (pts[i].0 - x);
        out[i] = u;
        (x, m) = pts[i];
    }
    let (mut x, mut m, mut u) = (0.0, m0, 0.0);
    for i in (0..split).rev() {
        u -= 0.5 * (m + pts[i].1) * (pts[i].0 - x);
        out[i] = u;
        (x, m) = pts[i];
    }
    out
}
