use crate::{Error, Result};

/// Trend-following coefficient applied to the weighted moving average of
/// recent price changes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Trend {
    /// One coefficient for both signs of the recent trend. `0.0` disables
    /// the trend term.
    Constant(f64),
    /// `up` applies when the moving average is `>= 0`, `down` otherwise.
    Asymmetric { up: f64, down: f64 },
}

impl Trend {
    pub const NONE: Trend = Trend::Constant(0.0);

    /// Coefficient in force for a given moving average of price changes.
    #[inline]
    pub fn coefficient(&self, ma: f64) -> f64 {
        match *self {
            Trend::Constant(d) => d,
            Trend::Asymmetric { up, down } => {
                if ma >= 0.0 {
                    up
                } else {
                    down
                }
            }
        }
    }

    pub fn is_none(&self) -> bool {
        matches!(self, Trend::Constant(d) if *d == 0.0)
    }

    fn is_finite(&self) -> bool {
        match *self {
            Trend::Constant(d) => d.is_finite(),
            Trend::Asymmetric { up, down } => up.is_finite() && down.is_finite(),
        }
    }
}

impl Default for Trend {
    fn default() -> Self {
        Trend::NONE
    }
}

/// Full parameterization of the dealer models.
///
/// The plain model has `trend = Trend::NONE` and `self_modulation = false`.
/// Self-modulation replaces `noise` by an amplitude derived from the recent
/// mean transaction interval. A non-zero trend adds the moving-average drift.
#[derive(Debug, Clone, PartialEq)]
pub struct SimParams {
    /// Spread `L`; a transaction happens once `|p1 - p2| >= L`.
    pub spread: f64,
    /// Noise amplitude `c`.
    pub noise: f64,
    /// Elementary price step `Δp`.
    pub dp: f64,
    /// Clock tick `Δt`. Must equal `dp * dp` unless `allow_dt_override`.
    pub dt: f64,
    pub allow_dt_override: bool,
    pub trend: Trend,
    /// Depth `M` of the weighted moving average of price changes.
    pub ma_depth: usize,
    pub self_modulation: bool,
    /// Window `τ` (time units) for the mean transaction interval.
    pub tau: f64,
    pub clamp_lo: f64,
    pub clamp_hi: f64,
    /// Mean interval assumed before the first transaction. `None` uses the
    /// geometric midpoint of the clamp band.
    pub initial_mean_interval: Option<f64>,
    pub p0: f64,
    pub seed: u64,
    pub n_ticks: usize,
    /// Cap on clock steps between two transactions.
    pub max_steps_per_tick: u64,
}

impl Default for SimParams {
    fn default() -> Self {
        SimParams {
            spread: 0.01,
            noise: 0.01,
            dp: 0.01,
            dt: 1e-4,
            allow_dt_override: false,
            trend: Trend::NONE,
            ma_depth: 1,
            self_modulation: false,
            tau: 150.0,
            clamp_lo: 3.0,
            clamp_hi: 50.0,
            initial_mean_interval: None,
            p0: 100.0,
            seed: 0,
            n_ticks: 1000,
            max_steps_per_tick: 100_000_000,
        }
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} must be positive (got {v})")))
    }
}

impl SimParams {
    /// Plain two-dealer model with the given spread and noise amplitude,
    /// `dp = 0.01` and `dt = dp²`.
    pub fn model1(spread: f64, noise: f64) -> Self {
        SimParams {
            spread,
            noise,
            ..SimParams::default()
        }
    }

    /// Sets `dp` and the matching clock tick `dt = dp²`.
    pub fn with_dp(mut self, dp: f64) -> Self {
        self.dp = dp;
        self.dt = dp * dp;
        self
    }

    pub fn with_trend(mut self, trend: Trend, ma_depth: usize) -> Self {
        self.trend = trend;
        self.ma_depth = ma_depth;
        self
    }

    pub fn with_self_modulation(mut self, tau: f64, clamp_lo: f64, clamp_hi: f64) -> Self {
        self.self_modulation = true;
        self.tau = tau;
        self.clamp_lo = clamp_lo;
        self.clamp_hi = clamp_hi;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_ticks(mut self, n: usize) -> Self {
        self.n_ticks = n;
        self
    }

    /// Mean interval used by the self-modulation before any transaction.
    pub fn bootstrap_mean_interval(&self) -> f64 {
        self.initial_mean_interval
            .unwrap_or_else(|| (self.clamp_lo * self.clamp_hi).sqrt())
    }

    pub fn validate(&self) -> Result<()> {
        positive("L", self.spread)?;
        // c = 0 is admitted: the dealers never move and no transaction occurs.
        if !(self.noise.is_finite() && self.noise >= 0.0) {
            return Err(Error::Config(format!(
                "c must be non-negative (got {})",
                self.noise
            )));
        }
        positive("dp", self.dp)?;
        positive("dt", self.dt)?;
        positive("tau", self.tau)?;
        positive("clamp_lo", self.clamp_lo)?;
        positive("p0", self.p0)?;
        if self.ma_depth < 1 {
            return Err(Error::Config("M must be at least 1".into()));
        }
        if !(self.clamp_hi.is_finite() && self.clamp_hi >= self.clamp_lo) {
            return Err(Error::Config(format!(
                "clamp_hi must be >= clamp_lo (got {} < {})",
                self.clamp_hi, self.clamp_lo
            )));
        }
        if !self.trend.is_finite() {
            return Err(Error::Config("d must be finite".into()));
        }
        if let Some(m) = self.initial_mean_interval {
            positive("initial_mean_interval", m)?;
        }
        if self.max_steps_per_tick == 0 {
            return Err(Error::Config("max_steps_per_tick must be positive".into()));
        }
        let want = self.dp * self.dp;
        if !self.allow_dt_override && (self.dt - want).abs() > 1e-9 * want {
            return Err(Error::Config(format!(
                "dt must equal dp*dp = {want} (got {}); pass the dt override to change it",
                self.dt
            )));
        }
        Ok(())
    }
}
