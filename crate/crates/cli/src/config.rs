//! Flat `key=value` configuration merged under command-line flags.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Args;
use dealer_core::{Error, Representation, Result, SimParams, Trend};

/// Which dealer model to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    /// Constant noise, no trend.
    Plain,
    /// Self-modulated noise.
    Modulated,
    /// Trend following.
    Trend,
    /// Self-modulated noise with trend following.
    ModulatedTrend,
}

impl FromStr for Model {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "1" => Ok(Model::Plain),
            "2" => Ok(Model::Modulated),
            "3" => Ok(Model::Trend),
            "2+3" => Ok(Model::ModulatedTrend),
            _ => Err(format!("unknown model {s:?} (expected 1, 2, 3 or 2+3)")),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Plain => "1",
            Model::Modulated => "2",
            Model::Trend => "3",
            Model::ModulatedTrend => "2+3",
        })
    }
}

impl Model {
    fn modulated(self) -> bool {
        matches!(self, Model::Modulated | Model::ModulatedTrend)
    }

    fn trending(self) -> bool {
        matches!(self, Model::Trend | Model::ModulatedTrend)
    }
}

/// Simulation flags. Every flag may also be given as `name=value` in a
/// config file; flags win over the file.
#[derive(Debug, Clone, Default, Args)]
pub struct SimArgs {
    /// Flat key=value file with defaults for any of the flags below.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Model variant: 1, 2, 3 or 2+3.
    #[arg(long)]
    pub model: Option<String>,
    /// Spread L.
    #[arg(long = "L")]
    pub spread: Option<f64>,
    /// Noise amplitude c.
    #[arg(long = "c")]
    pub noise: Option<f64>,
    /// Price step.
    #[arg(long)]
    pub dp: Option<f64>,
    /// Clock tick; defaults to dp*dp.
    #[arg(long)]
    pub dt: Option<f64>,
    /// Accept a dt other than dp*dp.
    #[arg(long)]
    pub dt_override: bool,
    /// Self-modulation window.
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub clamp_lo: Option<f64>,
    #[arg(long)]
    pub clamp_hi: Option<f64>,
    /// Trend coefficient.
    #[arg(long, allow_negative_numbers = true)]
    pub d: Option<f64>,
    /// Trend coefficient while the recent trend is up (needs --d-minus).
    #[arg(long, allow_negative_numbers = true)]
    pub d_plus: Option<f64>,
    /// Trend coefficient while the recent trend is down (needs --d-plus).
    #[arg(long, allow_negative_numbers = true)]
    pub d_minus: Option<f64>,
    /// Moving-average depth.
    #[arg(long = "M")]
    pub ma_depth: Option<usize>,
    /// Number of transactions.
    #[arg(long)]
    pub ticks: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Initial price.
    #[arg(long)]
    pub p0: Option<f64>,
    /// Engine representation: dealer or reduced.
    #[arg(long)]
    pub repr: Option<String>,
    /// Step cap between two transactions.
    #[arg(long)]
    pub max_steps: Option<u64>,
}

/// Keys accepted in config files.
pub const KEYS: &[&str] = &[
    "model",
    "L",
    "c",
    "dp",
    "dt",
    "dt-override",
    "tau",
    "clamp-lo",
    "clamp-hi",
    "d",
    "d-plus",
    "d-minus",
    "M",
    "ticks",
    "seed",
    "p0",
    "repr",
    "max-steps",
];

impl SimArgs {
    fn pairs(&self) -> Vec<(&'static str, String)> {
        let mut out = Vec::new();
        macro_rules! put {
            ($key:literal, $field:expr) => {
                if let Some(v) = &$field {
                    out.push(($key, v.to_string()));
                }
            };
        }
        put!("model", self.model);
        put!("L", self.spread);
        put!("c", self.noise);
        put!("dp", self.dp);
        put!("dt", self.dt);
        if self.dt_override {
            out.push(("dt-override", "true".to_string()));
        }
        put!("tau", self.tau);
        put!("clamp-lo", self.clamp_lo);
        put!("clamp-hi", self.clamp_hi);
        put!("d", self.d);
        put!("d-plus", self.d_plus);
        put!("d-minus", self.d_minus);
        put!("M", self.ma_depth);
        put!("ticks", self.ticks);
        put!("seed", self.seed);
        put!("p0", self.p0);
        put!("repr", self.repr);
        put!("max-steps", self.max_steps);
        out
    }
}

/// A validated simulation request.
#[derive(Debug, Clone, PartialEq)]
pub struct RunPlan {
    pub model: Model,
    pub params: SimParams,
    pub representation: Representation,
}

/// Parses a flat `key=value` file. Blank lines and `#` comments are skipped;
/// `_` in keys is read as `-`.
pub fn parse_kv_file(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: i + 1,
            msg: format!("expected key=value, got {line:?}"),
        })?;
        let key = k.trim().replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            return Err(Error::Config(format!(
                "unknown key {key:?} on line {}",
                i + 1
            )));
        }
        map.insert(key, v.trim().to_string());
    }
    Ok(map)
}

/// Merges flags over an optional config file and builds the run plan.
pub fn parse_config(args: &SimArgs) -> Result<RunPlan> {
    let mut merged = match &args.config {
        Some(path) => parse_kv_file(&read(path)?)?,
        None => BTreeMap::new(),
    };
    for (k, v) in args.pairs() {
        merged.insert(k.to_string(), v);
    }
    plan_from_map(&merged)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read config file {}: {e}", path.display())))
}

fn get<T: FromStr>(map: &BTreeMap<String, String>, key: &str) -> Result<Option<T>>
where
    T::Err: fmt::Display,
{
    map.get(key)
        .map(|v| {
            v.parse::<T>()
                .map_err(|e| Error::Config(format!("{key}: cannot parse {v:?}: {e}")))
        })
        .transpose()
}

/// Builds a plan from already-merged keys. Defaults are those of
/// [`SimParams::default`]; `dt` defaults to `dp*dp`.
pub fn plan_from_map(map: &BTreeMap<String, String>) -> Result<RunPlan> {
    if let Some(k) = map.keys().find(|k| !KEYS.contains(&k.as_str())) {
        return Err(Error::Config(format!("unknown key {k:?}")));
    }
    let model = match map.get("model") {
        Some(m) => m
            .parse::<Model>()
            .map_err(|e| Error::Config(format!("model: {e}")))?,
        None => Model::Plain,
    };
    let mut p = SimParams::default();
    if let Some(v) = get(map, "L")? {
        p.spread = v;
    }
    if let Some(v) = get(map, "c")? {
        p.noise = v;
    }
    if let Some(v) = get(map, "dp")? {
        p.dp = v;
    }
    p.dt = get(map, "dt")?.unwrap_or(p.dp * p.dp);
    p.allow_dt_override = get(map, "dt-override")?.unwrap_or(false);

    let modulation_keys = ["tau", "clamp-lo", "clamp-hi"];
    if !model.modulated() {
        if let Some(k) = modulation_keys.iter().find(|k| map.contains_key(**k)) {
            return Err(Error::Config(format!("{k}: only used by models 2 and 2+3")));
        }
    }
    p.self_modulation = model.modulated();
    if let Some(v) = get(map, "tau")? {
        p.tau = v;
    }
    if let Some(v) = get(map, "clamp-lo")? {
        p.clamp_lo = v;
    }
    if let Some(v) = get(map, "clamp-hi")? {
        p.clamp_hi = v;
    }

    let d: Option<f64> = get(map, "d")?;
    let d_plus: Option<f64> = get(map, "d-plus")?;
    let d_minus: Option<f64> = get(map, "d-minus")?;
    if model.trending() {
        p.trend = match (d, d_plus, d_minus) {
            (Some(d), None, None) => Trend::Constant(d),
            (None, Some(up), Some(down)) => Trend::Asymmetric { up, down },
            (None, None, None) => {
                return Err(Error::Config(
                    "d: models 3 and 2+3 need d or d-plus/d-minus".into(),
                ))
            }
            (Some(_), _, _) => {
                return Err(Error::Config(
                    "d: give either d or d-plus/d-minus, not both".into(),
                ))
            }
            _ => {
                return Err(Error::Config(
                    "d-plus: d-plus and d-minus go together".into(),
                ))
            }
        };
    } else if let Some(k) = ["d", "d-plus", "d-minus", "M"]
        .iter()
        .find(|k| map.contains_key(**k))
    {
        return Err(Error::Config(format!("{k}: only used by models 3 and 2+3")));
    }
    if let Some(v) = get(map, "M")? {
        p.ma_depth = v;
    }
    if let Some(v) = get(map, "ticks")? {
        p.n_ticks = v;
    }
    if let Some(v) = get(map, "seed")? {
        p.seed = v;
    }
    if let Some(v) = get(map, "p0")? {
        p.p0 = v;
    }
    if let Some(v) = get(map, "max-steps")? {
        p.max_steps_per_tick = v;
    }
    let representation = match map.get("repr").map(String::as_str) {
        None | Some("reduced") => Representation::Reduced,
        Some("dealer") => Representation::Dealer,
        Some(other) => {
            return Err(Error::Config(format!(
                "repr: expected dealer or reduced, got {other:?}"
            )))
        }
    };
    p.validate()?;
    Ok(RunPlan {
        model,
        params: p,
        representation,
    })
}
