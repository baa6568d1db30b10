//! Tail estimators: exponential decay rates and power-law exponents.

use crate::{Error, Result};

fn sorted_desc(samples: &[f64]) -> Result<Vec<f64>> {
    if samples.iter().any(|x| x.is_nan()) {
        return Err(Error::Data("samples contain NaN".into()));
    }
    let mut v = samples.to_vec();
    v.sort_by(|a, b| b.total_cmp(a));
    Ok(v)
}

fn tail_size(n: usize, fraction: f64, min: usize, what: &str) -> Result<usize> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::Data(format!(
            "{what}: fraction must be in (0, 1], got {fraction}"
        )));
    }
    let k = (fraction * n as f64).floor() as usize;
    if k < min {
        return Err(Error::Data(format!(
            "{what}: {k} tail samples, need at least {min}"
        )));
    }
    Ok(k)
}

/// Least-squares slope of `y` on `x`.
pub(crate) fn ols_slope(x: &[f64], y: &[f64]) -> Option<(f64, f64)> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut sq = 0.0;
    for (a, b) in x.iter().zip(y) {
        sxx += (a - mx) * (a - mx);
        sxy += (a - mx) * (b - my);
        sq += a * a;
    }
    // spread below rounding of the mean counts as none
    if sxx <= f64::EPSILON * sq {
        return None;
    }
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

/// Decay rate of an exponential tail: minus the least-squares slope of
/// `ln ccdf` against `x` over the largest `tail_fraction` of the samples.
///
/// The ccdf at the `i`-th largest sample uses the plotting position
/// `(i - 1/2)/n`.
pub fn fit_exponential_rate(samples: &[f64], tail_fraction: f64) -> Result<f64> {
    let n = samples.len();
    let k = tail_size(n, tail_fraction, 100, "exponential tail")?;
    let desc = sorted_desc(samples)?;
    let xs = &desc[..k];
    let ys: Vec<f64> = (1..=k)
        .map(|i| ((i as f64 - 0.5) / n as f64).ln())
        .collect();
    let (slope, _) =
        ols_slope(xs, &ys).ok_or_else(|| Error::Data("tail samples are all equal".into()))?;
    Ok(-slope)
}

/// Hill estimate of a Pareto tail `P(X > x) ~ x^(-β)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HillEstimate {
    pub exponent: f64,
    /// Order statistics used.
    pub k: usize,
    /// Smallest sample treated as tail.
    pub threshold: f64,
    /// Relative spread `(max - min)/β` of the estimates at `k/2`, `k`, `2k`.
    pub instability: f64,
}

impl HillEstimate {
    /// A power-law tail gives roughly the same exponent at neighbouring
    /// thresholds; an exponential tail does not.
    pub fn looks_power_law(&self) -> bool {
        self.instability < 0.2
    }
}

fn hill_at(desc: &[f64], k: usize) -> f64 {
    let xk = desc[k];
    let s: f64 = desc[..k].iter().map(|&x| (x / xk).ln()).sum();
    k as f64 / s
}

/// Hill estimator on the top `top_fraction` of `|samples|`.
pub fn hill_tail_exponent(samples: &[f64], top_fraction: f64) -> Result<HillEstimate> {
    let abs: Vec<f64> = samples
        .iter()
        .map(|x| x.abs())
        .filter(|&x| x > 0.0)
        .collect();
    let desc = sorted_desc(&abs)?;
    let n = desc.len();
    let k = tail_size(n, top_fraction, 500, "Hill tail")?;
    if 2 * k >= n {
        return Err(Error::Data("Hill tail fraction must be below 1/2".into()));
    }
    if desc[2 * k] <= 0.0 || desc[0] == desc[2 * k] {
        return Err(Error::Data("degenerate tail".into()));
    }
    let exponent = hill_at(&desc, k);
    let probes = [hill_at(&desc, k / 2), exponent, hill_at(&desc, 2 * k)];
    let hi = probes.iter().cloned().fold(f64::MIN, f64::max);
    let lo = probes.iter().cloned().fold(f64::MAX, f64::min);
    Ok(HillEstimate {
        exponent,
        k,
        threshold: desc[k],
        instability: (hi - lo) / exponent,
    })
}

/// Minus the slope of `ln ccdf` against `ln x` over the top fraction; a
/// cross-check on the Hill exponent.
pub fn loglog_ccdf_slope(samples: &[f64], top_fraction: f64) -> Result<f64> {
    let abs: Vec<f64> = samples
        .iter()
        .map(|x| x.abs())
        .filter(|&x| x > 0.0)
        .collect();
    let n = abs.len();
    let k = tail_size(n, top_fraction, 100, "log-log tail")?;
    let desc = sorted_desc(&abs)?;
    let xs: Vec<f64> = desc[..k].iter().map(|x| x.ln()).collect();
    let ys: Vec<f64> = (1..=k)
        .map(|i| ((i as f64 - 0.5) / n as f64).ln())
        .collect();
    let (slope, _) =
        ols_slope(&xs, &ys).ok_or_else(|| Error::Data("tail samples are all equal".into()))?;
    Ok(-slope)
}
