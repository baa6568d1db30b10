//! Estimates over a tick series and the files `analyze` writes.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use dealer_core::stats::{
    diffusion_sigma, e_series, empirical_ccdf, fit_exponential_rate, hill_tail_exponent,
    loglog_ccdf_slope, potential_curve, puck_slope, Histogram, Moments, PotentialFit,
    PotentialOptions, Symmetry, SIGMA_RATIO_LAGS,
};
use dealer_core::{Result, TickSeries};

use crate::kv::KvLines;

#[derive(Debug, Clone)]
pub struct AnalyzeOptions {
    /// Window for the self-modulation factors.
    pub tau: f64,
    pub ma_depth: usize,
    /// Ticks used for the potential; the whole series when `None`.
    pub window: Option<usize>,
    pub symmetry: Symmetry,
    /// Series with no trend for the diffusion ratio.
    pub reference: Option<TickSeries>,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            tau: 150.0,
            ma_depth: 1,
            window: None,
            symmetry: Symmetry::TwoSided,
            reference: None,
        }
    }
}

pub struct Analysis {
    pub summary: KvLines,
    pub potential: Option<PotentialFit>,
}

/// Runs every estimator the series supports. Estimators short of data
/// report `nan` and the reason goes to a `<key>_error` line.
pub fn analyze(series: &TickSeries, opts: &AnalyzeOptions) -> Analysis {
    let mut kv = KvLines::default();
    let intervals = series.intervals();
    let abs_dp = series.abs_dprices();
    kv.push("ticks", series.len());

    match Moments::of(&intervals) {
        Ok(m) => {
            kv.push("mean_interval", m.mean);
            kv.push("var_interval", m.variance);
            kv.push("cv_interval", m.cv());
        }
        Err(e) => kv.fail("mean_interval", &e),
    }
    match Moments::of(&abs_dp) {
        Ok(m) => {
            kv.push("mean_abs_dprice", m.mean);
            kv.push("var_abs_dprice", m.variance);
        }
        Err(e) => kv.fail("mean_abs_dprice", &e),
    }
    kv.result("interval_rate", fit_exponential_rate(&intervals, 0.3));
    kv.result("abs_dprice_rate", fit_exponential_rate(&abs_dp, 0.3));
    match hill_tail_exponent(&abs_dp, 0.01) {
        Ok(h) => {
            kv.push("hill_exponent", h.exponent);
            kv.push("hill_instability", h.instability);
            kv.push("hill_power_law", h.looks_power_law());
        }
        Err(e) => kv.fail("hill_exponent", &e),
    }
    kv.result("loglog_slope", loglog_ccdf_slope(&abs_dp, 0.01));

    if !series.is_empty() {
        let e = e_series(&series.ticks, opts.tau);
        kv.push("e_mean", e.iter().sum::<f64>() / e.len() as f64);
    }
    match puck_slope(&series.ticks, opts.ma_depth) {
        Ok(s) => {
            kv.push("puck_slope", s.slope);
            kv.push("puck_slope_se", s.std_err);
            kv.push("b_est", s.b_est);
        }
        Err(e) => kv.fail("puck_slope", &e),
    }
    let window = opts.window.unwrap_or(series.len());
    let popts = PotentialOptions {
        symmetry: opts.symmetry,
        ..PotentialOptions::default()
    };
    let potential = match potential_curve(&series.ticks, series.p0, opts.ma_depth, window, &popts) {
        Ok(f) => {
            kv.push("potential_a", f.a);
            kv.push("potential_a_se", f.se);
            kv.push("potential_a_left", f.a_left);
            kv.push("potential_a_right", f.a_right);
            kv.push("potential_b_est", f.b_est);
            Some(f)
        }
        Err(e) => {
            kv.fail("potential_a", &e);
            None
        }
    };

    let prices = series.prices();
    for (lag, s) in SIGMA_RATIO_LAGS.iter().zip(
        diffusion_sigma(&prices, &SIGMA_RATIO_LAGS)
            .map_or(vec![f64::NAN; SIGMA_RATIO_LAGS.len()], |v| v),
    ) {
        kv.push(&format!("sigma_{lag}"), s);
    }
    if let Some(reference) = &opts.reference {
        kv.result(
            "sigma_ratio",
            dealer_core::stats::sigma_ratio(&prices, &reference.prices(), &SIGMA_RATIO_LAGS),
        );
    }
    Analysis {
        summary: kv,
        potential,
    }
}

/// Writes `x,pdf,ccdf` at the centers of 50 equal bins spanning the data.
pub fn write_distribution(path: &Path, samples: &[f64]) -> Result<()> {
    let ccdf = empirical_ccdf(samples)?;
    let sorted = ccdf.sorted();
    let (lo, hi) = (sorted[0].min(0.0), sorted[sorted.len() - 1]);
    let mut w = BufWriter::new(fs::File::create(path)?);
    writeln!(w, "x,pdf,ccdf")?;
    if hi > lo {
        let h = Histogram::new(samples, lo, hi, 50)?;
        for (x, pdf) in h.centers().into_iter().zip(h.density()) {
            writeln!(w, "{x},{pdf},{}", ccdf.eval(x))?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Writes `x,mean_dp,count,fit`.
pub fn write_potential(path: &Path, fit: &PotentialFit) -> Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    writeln!(w, "x,mean_dp,count,fit")?;
    for ((x, m), c) in fit.centers.iter().zip(&fit.mean_dp).zip(&fit.counts) {
        writeln!(w, "{x},{m},{c},{}", fit.fitted(*x))?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `dist.csv` (|ΔP|), `dist_interval.csv`, `potential.csv` and
/// `summary.kv` into `dir`.
pub fn write_analysis(dir: &Path, series: &TickSeries, opts: &AnalyzeOptions) -> Result<Analysis> {
    fs::create_dir_all(dir)?;
    let analysis = analyze(series, opts);
    if series.len() >= 2 {
        write_distribution(&dir.join("dist.csv"), &series.abs_dprices())?;
        write_distribution(&dir.join("dist_interval.csv"), &series.intervals())?;
    }
    if let Some(fit) = &analysis.potential {
        write_potential(&dir.join("potential.csv"), fit)?;
    }
    analysis.summary.write(&dir.join("summary.kv"))?;
    Ok(analysis)
}
