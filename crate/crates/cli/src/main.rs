use std::fs;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use dealer_cli::analyze::{write_analysis, AnalyzeOptions};
use dealer_cli::config::{parse_config, SimArgs};
use dealer_cli::experiment::{run_experiment, DEFAULT_SEED, PRESETS};
use dealer_cli::oracle::{oracle_lines, OracleRequest};
use dealer_core::stats::Symmetry;
use dealer_core::{run, ClosedFormLaw, TickSeries};

#[derive(Parser)]
#[command(name = "dealersim", version, about = "Two-dealer market simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
#[allow(clippy::large_enum_variant)]
enum Command {
    /// Run a simulation and write ticks.csv.
    Simulate {
        #[command(flatten)]
        sim: SimArgs,
        /// Output directory.
        #[arg(long, env = "DEALERSIM_OUT", default_value = "out")]
        out: PathBuf,
    },
    /// Estimate statistics from a tick CSV.
    Analyze {
        /// Tick CSV as written by `simulate`.
        input: PathBuf,
        #[arg(long, env = "DEALERSIM_OUT", default_value = "out")]
        out: PathBuf,
        /// Window for the self-modulation factors.
        #[arg(long, default_value_t = 150.0)]
        tau: f64,
        /// Moving-average depth for the slope and potential.
        #[arg(long = "M", default_value_t = 1)]
        ma_depth: usize,
        /// Last ticks used for the potential (default: all).
        #[arg(long)]
        window: Option<usize>,
        /// Fit one quadratic for both sides of the moving average.
        #[arg(long)]
        symmetric: bool,
        /// Trend-free tick CSV for the diffusion ratio.
        #[arg(long)]
        reference: Option<PathBuf>,
    },
    /// Print exact values as key=value lines.
    Oracle {
        #[arg(long = "L", default_value_t = 0.01)]
        spread: f64,
        #[arg(long = "c", default_value_t = 0.01)]
        noise: f64,
        /// Tail exponent to solve the trend coefficient for.
        #[arg(long)]
        beta: Option<f64>,
        /// Trend coefficient.
        #[arg(long, allow_negative_numbers = true)]
        d: Option<f64>,
        /// Evaluate the interval distribution here.
        #[arg(long)]
        interval: Option<f64>,
        /// Evaluate the |ΔP| distribution here.
        #[arg(long)]
        dprice: Option<f64>,
        #[arg(long, default_value_t = 4)]
        moments: u32,
    },
    /// Run a preset and report measured against expected values.
    Experiment {
        /// One of fig2, fig7-8, fig10, fig11, fig12.
        name: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, env = "DEALERSIM_OUT")]
        out: Option<PathBuf>,
    },
}

fn read_ticks(path: &Path) -> Result<TickSeries> {
    let f = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    TickSeries::read_csv(BufReader::new(f)).with_context(|| format!("reading {}", path.display()))
}

fn main() -> ExitCode {
    match dispatch(Cli::parse().command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// `Ok(false)` when an experiment misses one of its targets.
fn dispatch(cmd: Command) -> Result<bool> {
    match cmd {
        Command::Simulate { sim, out } => {
            let plan = parse_config(&sim)?;
            let series = run(&plan.params, plan.representation)?;
            fs::create_dir_all(&out)?;
            let path = out.join("ticks.csv");
            series.write_csv(BufWriter::new(fs::File::create(&path)?))?;
            eprintln!(
                "model {}: {} ticks to {}",
                plan.model,
                series.len(),
                path.display()
            );
        }
        Command::Analyze {
            input,
            out,
            tau,
            ma_depth,
            window,
            symmetric,
            reference,
        } => {
            let series = read_ticks(&input)?;
            let opts = AnalyzeOptions {
                tau,
                ma_depth,
                window,
                symmetry: if symmetric {
                    Symmetry::Symmetric
                } else {
                    Symmetry::TwoSided
                },
                reference: reference.as_deref().map(read_ticks).transpose()?,
            };
            let a = write_analysis(&out, &series, &opts)?;
            print!("{}", a.summary.render());
        }
        Command::Oracle {
            spread,
            noise,
            beta,
            d,
            interval,
            dprice,
            moments,
        } => {
            let law = ClosedFormLaw::new(spread, noise)?;
            let req = OracleRequest {
                beta,
                d,
                interval,
                dprice,
                max_moment: moments,
            };
            let kv = oracle_lines(&law, &req)?;
            io::stdout().write_all(kv.render().as_bytes())?;
        }
        Command::Experiment { name, seed, out } => {
            if !PRESETS.contains(&name.as_str()) {
                anyhow::bail!(
                    "unknown preset {name:?} (available: {})",
                    PRESETS.join(", ")
                );
            }
            let dir = out.map(|o| o.join(&name));
            let report = run_experiment(&name, seed, dir.as_deref())?;
            for c in &report.checks {
                println!("{c}");
            }
            for (k, v) in report.info.iter() {
                println!("  {k}={v}");
            }
            if let Some(d) = &dir {
                println!("wrote {}", d.display());
            }
            return Ok(report.passed());
        }
    }
    Ok(true)
}
