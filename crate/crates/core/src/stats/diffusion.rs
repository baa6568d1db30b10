use super::dist::Moments;
use crate::{Error, Result};

/// `σ(Δn)`: standard deviation of `P(n+Δn) - P(n)` over all `n`, per lag.
pub fn diffusion_sigma(prices: &[f64], lags: &[usize]) -> Result<Vec<f64>> {
    lags.iter()
        .map(|&lag| {
            if lag == 0 || lag * 10 >= prices.len() {
                return Err(Error::Data(format!(
                    "lag {lag} needs a series longer than {} (got {})",
                    lag * 10,
                    prices.len()
                )));
            }
            let diffs: Vec<f64> = prices.windows(lag + 1).map(|w| w[lag] - w[0]).collect();
            Ok(Moments::of(&diffs)?.std_dev())
        })
        .collect()
}

/// Mean over `lags` of `σ_a(Δn) / σ_b(Δn)`.
pub fn sigma_ratio(prices_a: &[f64], prices_b: &[f64], lags: &[usize]) -> Result<f64> {
    let a = diffusion_sigma(prices_a, lags)?;
    let b = diffusion_sigma(prices_b, lags)?;
    if b.iter().any(|&s| s <= 0.0) {
        return Err(Error::Data("reference series does not diffuse".into()));
    }
    Ok(a.iter().zip(&b).map(|(x, y)| x / y).sum::<f64>() / lags.len() as f64)
}
