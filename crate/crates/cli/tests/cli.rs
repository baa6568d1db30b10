use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use dealer_cli::config::{parse_config, SimArgs};
use dealer_core::Trend;

fn dealersim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dealersim"))
        .args(args)
        .env_remove("DEALERSIM_OUT")
        .output()
        .unwrap()
}

fn ok(out: &Output) {
    assert!(
        out.status.success(),
        "status {:?}\nstderr: {}",
        out.status,
        String::from_utf8_lossy(&out.stderr)
    );
}

fn kv_value(text: &str, key: &str) -> Option<String> {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")).map(str::to_string))
}

#[test]
fn simulate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for d in [&a, &b] {
        ok(&dealersim(&[
            "simulate",
            "--model",
            "1",
            "--ticks",
            "1000",
            "--seed",
            "7",
            "--out",
            d.to_str().unwrap(),
        ]));
    }
    let x = fs::read(a.join("ticks.csv")).unwrap();
    assert_eq!(x, fs::read(b.join("ticks.csv")).unwrap());
    let text = String::from_utf8(x).unwrap();
    assert!(text.starts_with("n,t,price,interval,dprice\n"));
    assert_eq!(text.lines().count(), 1001);
    assert!(!text.contains('\r'));
}

#[test]
fn output_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_dealersim"))
        .args(["simulate", "--ticks", "10"])
        .env("DEALERSIM_OUT", dir.path())
        .output()
        .unwrap();
    ok(&out);
    assert!(dir.path().join("ticks.csv").exists());
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "model=3\nd=1.0\nM=4\nticks=50\n").unwrap();
    let args = SimArgs {
        config: Some(cfg.clone()),
        d: Some(-1.0),
        ..SimArgs::default()
    };
    let plan = parse_config(&args).unwrap();
    assert_eq!(plan.params.trend, Trend::Constant(-1.0));
    assert_eq!(plan.params.ma_depth, 4);
    assert_eq!(plan.params.n_ticks, 50);

    let out = dealersim(&[
        "simulate",
        "--config",
        cfg.to_str().unwrap(),
        "--d",
        "-1.0",
        "--out",
        dir.path().join("o").to_str().unwrap(),
    ]);
    ok(&out);
}

#[test]
fn bad_configuration_is_rejected() {
    let out = dealersim(&[
        "simulate",
        "--dt",
        "0.5",
        "--dp",
        "0.01",
        "--out",
        "/nonexistent",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("dp*dp"));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "spread=0.01\n").unwrap();
    let out = dealersim(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown key"));

    let out = dealersim(&["simulate", "--L", "-1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn analyze_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let sim = dir.path().join("sim");
    ok(&dealersim(&[
        "simulate",
        "--model",
        "3",
        "--d",
        "-1",
        "--M",
        "5",
        "--ticks",
        "5000",
        "--seed",
        "3",
        "--out",
        sim.to_str().unwrap(),
    ]));
    let an = dir.path().join("an");
    let out = dealersim(&[
        "analyze",
        sim.join("ticks.csv").to_str().unwrap(),
        "--M",
        "5",
        "--out",
        an.to_str().unwrap(),
    ]);
    ok(&out);
    let dist = fs::read_to_string(an.join("dist.csv")).unwrap();
    assert!(dist.starts_with("x,pdf,ccdf\n"));
    let pot = fs::read_to_string(an.join("potential.csv")).unwrap();
    assert!(pot.starts_with("x,mean_dp,count,fit\n"));
    let summary = fs::read_to_string(an.join("summary.kv")).unwrap();
    assert_eq!(kv_value(&summary, "ticks").as_deref(), Some("5000"));
    let b: f64 = kv_value(&summary, "b_est").unwrap().parse().unwrap();
    assert!(
        b > 0.0,
        "contrarian market should have a stable potential: {b}"
    );
    assert_eq!(summary, String::from_utf8(out.stdout).unwrap());
}

#[test]
fn analyze_reports_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("t.csv");
    fs::write(&f, "n,t,price,interval,dprice\n1,0.5,abc,0.5,0\n").unwrap();
    let out = dealersim(&[
        "analyze",
        f.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn oracle_prints_key_values() {
    let out = dealersim(&["oracle", "--d", "-1", "--interval", "0.5"]);
    ok(&out);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().all(|l| l.split_once('=').is_some()));
    assert_eq!(kv_value(&text, "mean_interval").as_deref(), Some("0.5"));
    assert_eq!(kv_value(&text, "b_mean").as_deref(), Some("1"));
    let r: f64 = kv_value(&text, "diffusion_ratio").unwrap().parse().unwrap();
    assert!((r - 2.0 / 3.0).abs() < 1e-12);
    let d: f64 = kv_value(&text, "trend_coefficient_beta3")
        .unwrap()
        .parse()
        .unwrap();
    assert!((d - 1.2531).abs() < 1e-3);
}

fn experiment(name: &str, dir: &Path) -> (Output, String) {
    let out = dealersim(&["experiment", name, "--out", dir.to_str().unwrap()]);
    let report = fs::read_to_string(dir.join(name).join("report.kv")).unwrap();
    (out, report)
}

#[test]
fn experiments_are_reproducible_and_exit_with_verdict() {
    for name in ["fig11", "fig12"] {
        let dir = tempfile::tempdir().unwrap();
        let (out, report) = experiment(name, &dir.path().join("a"));
        let (_, again) = experiment(name, &dir.path().join("b"));
        assert_eq!(report, again);
        let ticks = |d: &str| fs::read(dir.path().join(d).join(name).join("ticks.csv")).unwrap();
        assert_eq!(ticks("a"), ticks("b"));
        let passed = kv_value(&report, "passed").unwrap() == "true";
        assert_eq!(
            out.status.code(),
            Some(if passed { 0 } else { 1 }),
            "{name}"
        );
        assert!(report.lines().any(|l| l.ends_with(".source=reported")));
    }
}

#[test]
fn unknown_preset_fails() {
    let out = dealersim(&["experiment", "fig99"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("fig11"));
}
