//! Experiment presets: parameter sets, measured quantities and the
//! expected values they are judged against.

use std::fmt;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use dealer_core::closedform::{diffusion_ratio, solve_tail_exponent, MomentKind, Which};
use dealer_core::stats::{
    e_series, empirical_ccdf, fit_exponential_rate, hill_tail_exponent, loglog_ccdf_slope,
    potential_curve, puck_slope, Moments, PotentialFit, PotentialOptions, PuckSlope, Symmetry,
};
use dealer_core::{
    run, ClosedFormLaw, Error, Representation, Result, SimParams, SimState, TickSeries, Trend,
};

use crate::analyze::{write_analysis, write_potential, AnalyzeOptions};
use crate::kv::KvLines;

/// Seed used by every preset unless another is given.
pub const DEFAULT_SEED: u64 = 12345;

pub const PRESETS: &[&str] = &["fig2", "fig7-8", "fig10", "fig11", "fig12"];

/// Where an expected value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    /// Stated or shown in the original publication.
    Reported,
    /// Obtained by evaluating the exact formulas.
    Computed,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::Reported => "reported",
            Source::Computed => "computed",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Target {
    /// `|measured/value - 1| <= tol`.
    Rel {
        value: f64,
        tol: f64,
    },
    /// `lo <= measured <= hi`.
    Within {
        lo: f64,
        hi: f64,
    },
    AtLeast(f64),
    Greater(f64),
    Less(f64),
    /// A condition, measured as 1 (holds) or 0.
    Holds,
}

impl Target {
    fn accepts(&self, x: f64) -> bool {
        match *self {
            Target::Rel { value, tol } => (x / value - 1.0).abs() <= tol,
            Target::Within { lo, hi } => (lo..=hi).contains(&x),
            Target::AtLeast(v) => x >= v,
            Target::Greater(v) => x > v,
            Target::Less(v) => x < v,
            Target::Holds => x == 1.0,
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Target::Rel { value, tol } => write!(f, "{value} +-{}%", tol * 100.0),
            Target::Within { lo, hi } => write!(f, "[{lo}, {hi}]"),
            Target::AtLeast(v) => write!(f, ">= {v}"),
            Target::Greater(v) => write!(f, "> {v}"),
            Target::Less(v) => write!(f, "< {v}"),
            Target::Holds => f.write_str("holds"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub target: Target,
    pub source: Source,
    pub pass: bool,
}

impl Check {
    pub fn new(name: &str, measured: f64, target: Target, source: Source) -> Self {
        Check {
            name: name.to_string(),
            measured,
            target,
            source,
            pass: target.accepts(measured),
        }
    }

    pub fn condition(name: &str, holds: bool, source: Source) -> Self {
        Check::new(name, if holds { 1.0 } else { 0.0 }, Target::Holds, source)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: measured {} target {} ({})",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.measured,
            self.target,
            self.source
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub preset: String,
    pub seed: u64,
    pub checks: Vec<Check>,
    /// Measured values without a pass/fail target.
    pub info: KvLines,
}

impl Report {
    fn new(preset: &str, seed: u64) -> Self {
        Report {
            preset: preset.to_string(),
            seed,
            checks: Vec::new(),
            info: KvLines::default(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_kv(&self) -> KvLines {
        let mut kv = KvLines::default();
        kv.push("preset", &self.preset);
        kv.push("seed", self.seed);
        for c in &self.checks {
            kv.push(&format!("{}.measured", c.name), c.measured);
            kv.push(&format!("{}.target", c.name), c.target);
            kv.push(&format!("{}.source", c.name), c.source);
            kv.push(&format!("{}.pass", c.name), c.pass);
        }
        for (k, v) in self.info.iter() {
            kv.push(&format!("info.{k}"), v);
        }
        kv.push("passed", self.passed());
        kv
    }
}

/// Runs a preset; with `out` set, writes `ticks.csv`, analysis files and
/// `report.kv` there.
pub fn run_experiment(name: &str, seed: u64, out: Option<&Path>) -> Result<Report> {
    if let Some(dir) = out {
        fs::create_dir_all(dir)?;
    }
    let report = match name {
        "fig2" => plain_distributions(seed, out),
        "fig7-8" => clustering(seed, out),
        "fig10" => power_law(seed, out),
        "fig11" => potentials(seed, out),
        "fig12" => bubble(seed, out),
        _ => Err(Error::Config(format!(
            "unknown preset {name:?} (available: {})",
            PRESETS.join(", ")
        ))),
    }
    .map_err(|e| context(name, e))?;
    if let Some(dir) = out {
        report.to_kv().write(&dir.join("report.kv"))?;
    }
    Ok(report)
}

fn context(preset: &str, e: Error) -> Error {
    match e {
        Error::Config(m) if m.starts_with("unknown preset") => Error::Config(m),
        Error::Io(e) => Error::Io(e),
        other => Error::Data(format!("preset {preset}: {other}")),
    }
}

fn write_ticks(dir: &Path, series: &TickSeries) -> Result<()> {
    let f = BufWriter::new(fs::File::create(dir.join("ticks.csv"))?);
    series.write_csv(f)
}

fn law() -> ClosedFormLaw {
    ClosedFormLaw::new(0.01, 0.01).expect("unit law")
}

/// Plain model at `L = c = Δp = 0.01`.
pub fn plain_params(seed: u64, ticks: usize) -> SimParams {
    SimParams::model1(0.01, 0.01)
        .with_seed(seed)
        .with_ticks(ticks)
}

/// Self-modulated model with `τ = 150` and the band `[3, 50]`.
pub fn modulated_params(seed: u64, ticks: usize) -> SimParams {
    plain_params(seed, ticks).with_self_modulation(150.0, 3.0, 50.0)
}

pub fn trend_params(seed: u64, ticks: usize, trend: Trend, ma_depth: usize) -> SimParams {
    plain_params(seed, ticks).with_trend(trend, ma_depth)
}

fn plain_distributions(seed: u64, out: Option<&Path>) -> Result<Report> {
    let law = law();
    let series = run(&plain_params(seed, 100_000), Representation::Reduced)?;
    let intervals = series.intervals();
    let abs_dp = series.abs_dprices();
    let mi = Moments::of(&intervals)?;
    let md = Moments::of(&abs_dp)?;
    let (ri, rd) = law.tail_rates();
    let mut r = Report::new("fig2", seed);
    let rel = |value, tol| Target::Rel { value, tol };
    r.checks.extend([
        Check::new(
            "mean_interval",
            mi.mean,
            rel(law.mean_interval(), 0.05),
            Source::Computed,
        ),
        Check::new(
            "var_interval",
            mi.variance,
            rel(law.variance(MomentKind::Interval)?, 0.10),
            Source::Computed,
        ),
        Check::new(
            "mean_abs_dprice",
            md.mean,
            rel(law.moment(MomentKind::AbsDprice, 1)?, 0.05),
            Source::Computed,
        ),
        Check::new(
            "var_abs_dprice",
            md.variance,
            rel(law.variance(MomentKind::AbsDprice)?, 0.10),
            Source::Computed,
        ),
        Check::new(
            "interval_rate",
            fit_exponential_rate(&intervals, 0.3)?,
            rel(ri, 0.10),
            Source::Computed,
        ),
        Check::new(
            "abs_dprice_rate",
            fit_exponential_rate(&abs_dp, 0.3)?,
            rel(rd, 0.10),
            Source::Computed,
        ),
    ]);
    if let Some(dir) = out {
        write_ticks(dir, &series)?;
        write_analysis(dir, &series, &AnalyzeOptions::default())?;
        write_law_comparison(&dir.join("interval_law.csv"), &intervals, |x| {
            law.q1(x, Which::Ccdf)
        })?;
        write_law_comparison(&dir.join("abs_dprice_law.csv"), &abs_dp, |x| {
            law.q2(x, Which::Ccdf)
        })?;
    }
    Ok(r)
}

/// `x,empirical_ccdf,exact_ccdf` on 60 points up to the 99.9% quantile.
fn write_law_comparison(
    path: &Path,
    samples: &[f64],
    exact: impl Fn(f64) -> Result<f64>,
) -> Result<()> {
    let ccdf = empirical_ccdf(samples)?;
    let s = ccdf.sorted();
    let top = s[((s.len() - 1) as f64 * 0.999) as usize];
    let mut w = BufWriter::new(fs::File::create(path)?);
    writeln!(w, "x,empirical_ccdf,exact_ccdf")?;
    for i in 0..=60 {
        let x = top * i as f64 / 60.0;
        writeln!(w, "{x},{},{}", ccdf.eval(x), exact(x)?)?;
    }
    w.flush()?;
    Ok(())
}

/// Self-modulation statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusteringStats {
    pub interval_cv: f64,
    pub mean_interval: f64,
    /// Empirical interval ccdf at five times the mean.
    pub ccdf_at_5_means: f64,
    pub e_mean: f64,
    pub e_cv: f64,
}

pub fn clustering_stats(series: &TickSeries, tau: f64) -> Result<ClusteringStats> {
    let intervals = series.intervals();
    let m = Moments::of(&intervals)?;
    let e = Moments::of(&e_series(&series.ticks, tau))?;
    Ok(ClusteringStats {
        interval_cv: m.cv(),
        mean_interval: m.mean,
        ccdf_at_5_means: empirical_ccdf(&intervals)?.eval(5.0 * m.mean),
        e_mean: e.mean,
        e_cv: e.cv(),
    })
}

fn clustering(seed: u64, out: Option<&Path>) -> Result<Report> {
    let params = modulated_params(seed, 50_000);
    let series = run(&params, Representation::Reduced)?;
    let s = clustering_stats(&series, params.tau)?;
    let mut r = Report::new("fig7-8", seed);
    r.checks.extend([
        Check::new(
            "interval_cv",
            s.interval_cv,
            Target::Greater(1.0),
            Source::Reported,
        ),
        Check::new(
            "ccdf_at_5_means",
            s.ccdf_at_5_means,
            Target::Greater((-5.0f64).exp()),
            Source::Reported,
        ),
        Check::new(
            "e_mean",
            s.e_mean,
            Target::Rel {
                value: 1.0,
                tol: 0.05,
            },
            Source::Reported,
        ),
    ]);
    r.info.push("mean_interval", s.mean_interval);
    r.info.push("e_cv", s.e_cv);
    if let Some(dir) = out {
        write_ticks(dir, &series)?;
        let opts = AnalyzeOptions {
            tau: params.tau,
            ..AnalyzeOptions::default()
        };
        write_analysis(dir, &series, &opts)?;
        let mut w = BufWriter::new(fs::File::create(dir.join("e.csv"))?);
        writeln!(w, "n,e")?;
        for (t, e) in series.ticks.iter().zip(e_series(&series.ticks, params.tau)) {
            writeln!(w, "{},{e}", t.n)?;
        }
        w.flush()?;
    }
    Ok(r)
}

fn power_law(seed: u64, out: Option<&Path>) -> Result<Report> {
    let d = 1.25;
    let series = run(
        &trend_params(seed, 1_000_000, Trend::Constant(d), 1),
        Representation::Reduced,
    )?;
    let abs_dp = series.abs_dprices();
    let hill = hill_tail_exponent(&abs_dp, 0.01)?;
    let mut r = Report::new("fig10", seed);
    r.checks.push(Check::new(
        "hill_exponent",
        hill.exponent,
        Target::Within { lo: 2.5, hi: 3.5 },
        Source::Reported,
    ));
    r.info.push("hill_instability", hill.instability);
    r.info
        .push("loglog_slope", loglog_ccdf_slope(&abs_dp, 0.01)?);
    r.info
        .push("solved_exponent", solve_tail_exponent(d, &law())?);
    if let Some(dir) = out {
        write_ticks(dir, &series)?;
        write_analysis(dir, &series, &AnalyzeOptions::default())?;
    }
    Ok(r)
}

/// Runs consecutive segments of `(ticks, trend)` in one simulation; the
/// trend switches right after the last tick of each segment.
pub fn run_schedule(base: &SimParams, schedule: &[(usize, Trend)]) -> Result<TickSeries> {
    let mut params = base.clone();
    params.trend = schedule.first().map_or(Trend::NONE, |s| s.1);
    let mut state = SimState::new(params, Representation::Reduced)?;
    let mut out = TickSeries::new(base.p0);
    for &(n, trend) in schedule {
        state.set_trend(trend);
        for _ in 0..n {
            out.ticks.push(state.next_tick()?);
        }
    }
    Ok(out)
}

/// `d = -1, 0, +1`, then `+1` on rising and `-1` on falling trends, 1000
/// ticks each.
pub fn potential_schedule() -> Vec<(usize, Trend)> {
    vec![
        (1000, Trend::Constant(-1.0)),
        (1000, Trend::Constant(0.0)),
        (1000, Trend::Constant(1.0)),
        (
            1000,
            Trend::Asymmetric {
                up: 1.0,
                down: -1.0,
            },
        ),
    ]
}

pub const POTENTIAL_DEPTH: usize = 10;
pub const POTENTIAL_WINDOW: usize = 500;

#[derive(Debug, Clone, PartialEq)]
pub struct SegmentFit {
    pub trend: Trend,
    pub potential: PotentialFit,
    pub slope: PuckSlope,
}

/// Potential and regression slope over the last `window` ticks of each
/// segment.
pub fn segment_fits(
    series: &TickSeries,
    schedule: &[(usize, Trend)],
    ma_depth: usize,
    window: usize,
) -> Result<Vec<SegmentFit>> {
    let opts = PotentialOptions {
        symmetry: Symmetry::TwoSided,
        ..PotentialOptions::default()
    };
    let mut end = 0;
    let mut fits = Vec::new();
    for &(n, trend) in schedule {
        end += n;
        if end > series.len() {
            return Err(Error::Data("schedule is longer than the series".into()));
        }
        let ticks = &series.ticks[..end];
        fits.push(SegmentFit {
            trend,
            potential: potential_curve(ticks, series.p0, ma_depth, window, &opts)?,
            slope: puck_slope(&ticks[end - window..], ma_depth)?,
        });
    }
    Ok(fits)
}

fn potentials(seed: u64, out: Option<&Path>) -> Result<Report> {
    let schedule = potential_schedule();
    let base = trend_params(seed, 0, Trend::NONE, POTENTIAL_DEPTH);
    let series = run_schedule(&base, &schedule)?;
    let fits = segment_fits(&series, &schedule, POTENTIAL_DEPTH, POTENTIAL_WINDOW)?;
    let mut r = Report::new("fig11", seed);
    let [stable, flat, unstable, asym] = &fits[..] else {
        unreachable!("four segments")
    };
    r.checks.extend([
        Check::new(
            "stable_a",
            stable.potential.a,
            Target::Greater(0.0),
            Source::Reported,
        ),
        Check::new(
            "flat_abs_a",
            flat.potential.a.abs(),
            Target::Less(flat.potential.noise_floor()),
            Source::Reported,
        ),
        Check::new(
            "unstable_a",
            unstable.potential.a,
            Target::Less(0.0),
            Source::Reported,
        ),
        Check::condition(
            "asymmetric_opposite_sides",
            asym.potential.a_left * asym.potential.a_right < 0.0,
            Source::Reported,
        ),
    ]);
    for (name, f) in ["stable", "flat", "unstable", "asymmetric"]
        .iter()
        .zip(&fits)
    {
        r.info.push(&format!("{name}_a_left"), f.potential.a_left);
        r.info.push(&format!("{name}_a_right"), f.potential.a_right);
        r.info.push(&format!("{name}_a_se"), f.potential.se);
        r.info
            .push(&format!("{name}_b_potential"), f.potential.b_est);
        r.info.push(&format!("{name}_b_slope"), f.slope.b_est);
    }
    if let Some(dir) = out {
        write_ticks(dir, &series)?;
        for (k, f) in fits.iter().enumerate() {
            write_potential(
                &dir.join(format!("potential_seg{}.csv", k + 1)),
                &f.potential,
            )?;
        }
        let opts = AnalyzeOptions {
            ma_depth: POTENTIAL_DEPTH,
            window: Some(POTENTIAL_WINDOW),
            ..AnalyzeOptions::default()
        };
        write_analysis(dir, &series, &opts)?;
    }
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BubbleMetrics {
    /// Share of consecutive windows whose every price exceeds `p0`.
    pub above_fraction: f64,
    pub windows: usize,
    /// R² of `ln(P - p0 + 1)` against `t`; 0 once `P - p0 + 1 <= 0`.
    pub r_squared: f64,
    /// Slope of that fit per unit time.
    pub growth_per_time: f64,
    /// Slope of the same quantity against the tick index.
    pub growth_per_tick: f64,
    pub final_excess: f64,
}

fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxx += (a - mx) * (a - mx);
        sxy += (a - mx) * (b - my);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return (0.0, 0.0);
    }
    (sxy / sxx, sxy * sxy / (sxx * syy))
}

pub fn bubble_metrics(series: &TickSeries, window: usize) -> BubbleMetrics {
    let p0 = series.p0;
    let prices = series.prices();
    let windows = prices.len() / window;
    let above = prices
        .chunks_exact(window)
        .filter(|w| w.iter().all(|&p| p > p0))
        .count();
    let defined = prices.iter().all(|&p| p - p0 + 1.0 > 0.0);
    let (growth_per_time, growth_per_tick, r_squared) = if defined && !prices.is_empty() {
        let y: Vec<f64> = prices.iter().map(|p| (p - p0 + 1.0).ln()).collect();
        let t: Vec<f64> = series.ticks.iter().map(|r| r.t).collect();
        let n: Vec<f64> = series.ticks.iter().map(|r| r.n as f64).collect();
        let (gt, r2) = linear_fit(&t, &y);
        (gt, linear_fit(&n, &y).0, r2)
    } else {
        (f64::NAN, f64::NAN, 0.0)
    };
    BubbleMetrics {
        above_fraction: if windows == 0 {
            0.0
        } else {
            above as f64 / windows as f64
        },
        windows,
        r_squared,
        growth_per_time,
        growth_per_tick,
        final_excess: prices.last().map_or(0.0, |p| p - p0),
    }
}

fn bubble(seed: u64, out: Option<&Path>) -> Result<Report> {
    let d = 2.0;
    let series = run(
        &trend_params(seed, 2000, Trend::Constant(d), 10),
        Representation::Reduced,
    )?;
    let m = bubble_metrics(&series, 100);
    let mut r = Report::new("fig12", seed);
    r.checks.extend([
        Check::new(
            "above_start_fraction",
            m.above_fraction,
            Target::AtLeast(0.95),
            Source::Reported,
        ),
        Check::new(
            "log_excess_r2",
            m.r_squared,
            Target::AtLeast(0.9),
            Source::Reported,
        ),
        Check::condition(
            "diffusion_formula_diverges",
            matches!(diffusion_ratio(d, &law()), Err(Error::BubbleRegime { .. })),
            Source::Computed,
        ),
    ]);
    r.info.push("growth_per_time", m.growth_per_time);
    r.info.push("growth_per_tick", m.growth_per_tick);
    r.info.push("guideline_growth", 0.004);
    r.info.push("final_excess", m.final_excess);
    if let Some(dir) = out {
        write_ticks(dir, &series)?;
        let opts = AnalyzeOptions {
            ma_depth: 10,
            ..AnalyzeOptions::default()
        };
        write_analysis(dir, &series, &opts)?;
    }
    Ok(r)
}
