use crate::{Error, Result};

/// Mean, sample variance and coefficient of variation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub n: usize,
    pub mean: f64,
    pub variance: f64,
}

impl Moments {
    pub fn of(samples: &[f64]) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::Data(format!(
                "need at least 2 samples, got {}",
                samples.len()
            )));
        }
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let variance = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
        Ok(Moments {
            n: samples.len(),
            mean,
            variance,
        })
    }

    pub fn std_dev(&self) -> f64 {
        self.variance.sqrt()
    }

    pub fn cv(&self) -> f64 {
        self.std_dev() / self.mean
    }
}

/// Right-continuous empirical survival function `#{x_i > x} / n`.
///
/// At the smallest sample the value is `1 - 1/n` (for distinct samples).
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCcdf {
    sorted: Vec<f64>,
}

impl EmpiricalCcdf {
    pub fn new(samples: &[f64]) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::Data(format!(
                "empirical ccdf needs at least 2 samples, got {}",
                samples.len()
            )));
        }
        if samples.iter().any(|x| x.is_nan()) {
            return Err(Error::Data("samples contain NaN".into()));
        }
        let mut sorted = samples.to_vec();
        sorted.sort_by(f64::total_cmp);
        Ok(EmpiricalCcdf { sorted })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn eval(&self, x: f64) -> f64 {
        let above = self.sorted.len() - self.sorted.partition_point(|&s| s <= x);
        above as f64 / self.sorted.len() as f64
    }

    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }
}

/// Convenience wrapper for [`EmpiricalCcdf::new`].
pub fn empirical_ccdf(samples: &[f64]) -> Result<EmpiricalCcdf> {
    EmpiricalCcdf::new(samples)
}

/// Equal-width histogram.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub bin_edges: Vec<f64>,
    pub counts: Vec<u64>,
    /// All samples, including those outside the edges.
    pub total: u64,
}

impl Histogram {
    pub fn new(samples: &[f64], lo: f64, hi: f64, bins: usize) -> Result<Self> {
        if bins == 0 || !(hi > lo) {
            return Err(Error::Data(format!(
                "histogram needs bins > 0 and hi > lo (got {bins}, [{lo}, {hi}])"
            )));
        }
        let width = (hi - lo) / bins as f64;
        let bin_edges: Vec<f64> = (0..=bins).map(|i| lo + width * i as f64).collect();
        let mut counts = vec![0u64; bins];
        for &x in samples {
            if x >= lo && x <= hi {
                let k = (((x - lo) / width) as usize).min(bins - 1);
                counts[k] += 1;
            }
        }
        Ok(Histogram {
            bin_edges,
            counts,
            total: samples.len() as u64,
        })
    }

    pub fn centers(&self) -> Vec<f64> {
        self.bin_edges
            .windows(2)
            .map(|w| 0.5 * (w[0] + w[1]))
            .collect()
    }

    /// Density estimate per bin, normalized by `total`.
    pub fn density(&self) -> Vec<f64> {
        self.bin_edges
            .windows(2)
            .zip(&self.counts)
            .map(|(w, &c)| c as f64 / (self.total as f64 * (w[1] - w[0])))
            .collect()
    }
}

/// `q`-quantile by linear interpolation of sorted data.
pub(crate) fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let i = pos.floor() as usize;
    let frac = pos - i as f64;
    if i + 1 < sorted.len() {
        sorted[i] * (1.0 - frac) + sorted[i + 1] * frac
    } else {
        sorted[i]
    }
}
