//! Acceptance suite. Every Monte Carlo run uses `SUITE_SEED`; each test
//! prints one PASS/FAIL line before asserting.

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use dealer_cli::experiment::{
    bubble_metrics, clustering_stats, modulated_params, plain_params, potential_schedule,
    run_schedule, segment_fits, trend_params, POTENTIAL_DEPTH, POTENTIAL_WINDOW,
};
use dealer_core::closedform::quad::integrate_to_infinity;
use dealer_core::closedform::{
    diffusion_ratio, solve_tail_exponent, solve_trend_coefficient, MomentKind, Which, CATALAN,
};
use dealer_core::stats::{
    fit_exponential_rate, hill_tail_exponent, puck_slope, sigma_ratio, Moments, SIGMA_RATIO_LAGS,
};
use dealer_core::{run, ClosedFormLaw, Error, Representation, TickSeries, Trend};

const SUITE_SEED: u64 = 12345;

fn report(id: u32, pass: bool, detail: String) {
    println!(
        "criterion {id:>2}: {} {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {id} failed: {detail}");
}

fn within(x: f64, target: f64, rel: f64) -> bool {
    (x / target - 1.0).abs() <= rel
}

fn law() -> ClosedFormLaw {
    ClosedFormLaw::new(0.01, 0.01).unwrap()
}

/// Plain-model run shared by criteria 1-4, with its wall time.
fn plain_run() -> &'static (TickSeries, Duration) {
    static RUN: OnceLock<(TickSeries, Duration)> = OnceLock::new();
    RUN.get_or_init(|| {
        let start = Instant::now();
        let s = run(&plain_params(SUITE_SEED, 100_000), Representation::Reduced).unwrap();
        (s, start.elapsed())
    })
}

#[test]
fn criterion_01_plain_mean_interval() {
    let (s, elapsed) = plain_run();
    let m = Moments::of(&s.intervals()).unwrap().mean;
    let ok = within(m, 0.5, 0.05) && elapsed.as_secs_f64() < 10.0;
    report(
        1,
        ok,
        format!(
            "mean I = {m:.5} (0.5 +-5%), runtime {:.2} s (< 10 s)",
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_02_plain_interval_variance() {
    let v = Moments::of(&plain_run().0.intervals()).unwrap().variance;
    report(
        2,
        within(v, 1.0 / 6.0, 0.10),
        format!("var I = {v:.5} (0.16667 +-10%)"),
    );
}

#[test]
fn criterion_03_plain_price_change_moments() {
    let m = Moments::of(&plain_run().0.abs_dprices()).unwrap();
    let ok = within(m.mean, 3.7123e-3, 0.05) && within(m.variance, 1.1219e-5, 0.10);
    report(
        3,
        ok,
        format!(
            "mean |dP| = {:.5e} (3.7123e-3 +-5%), var = {:.5e} (1.1219e-5 +-10%)",
            m.mean, m.variance
        ),
    );
}

#[test]
fn criterion_04_tail_rates() {
    let s = &plain_run().0;
    let ri = fit_exponential_rate(&s.intervals(), 0.3).unwrap();
    let rd = fit_exponential_rate(&s.abs_dprices(), 0.3).unwrap();
    let ok = within(ri, 2.4674, 0.10) && within(rd, 314.16, 0.10);
    report(
        4,
        ok,
        format!("interval rate {ri:.4} (2.4674 +-10%), |dP| rate {rd:.2} (314.16 +-10%)"),
    );
}

#[test]
fn criterion_05_oracle_consistency() {
    let start = Instant::now();
    let l = law();
    let mut worst: f64 = 0.0;
    for k in 1..=4u32 {
        let qi = integrate_to_infinity(
            |i| {
                if i <= 0.0 {
                    0.0
                } else {
                    i.powi(k as i32) * l.q1(i, Which::Pdf).unwrap()
                }
            },
            0.0,
            0.0,
            1e-12,
        )
        .unwrap();
        let qd = integrate_to_infinity(
            |x| x.powi(k as i32) * l.q2(x, Which::Pdf).unwrap(),
            0.0,
            0.0,
            1e-12,
        )
        .unwrap();
        let mi = l.moment(MomentKind::Interval, k).unwrap();
        let md = l.moment(MomentKind::AbsDprice, k).unwrap();
        worst = worst.max((qi / mi - 1.0).abs()).max((qd / md - 1.0).abs());
    }
    let (lv, cv) = (l.spread, l.noise);
    let pi = std::f64::consts::PI;
    let identities = [
        (
            l.moment(MomentKind::Interval, 1).unwrap(),
            lv * lv / (2.0 * cv * cv),
        ),
        (
            l.variance(MomentKind::Interval).unwrap(),
            lv.powi(4) / (6.0 * cv.powi(4)),
        ),
        (
            l.moment(MomentKind::AbsDprice, 1).unwrap(),
            4.0 * CATALAN * lv / (pi * pi),
        ),
        (
            l.variance(MomentKind::AbsDprice).unwrap(),
            (0.25 - 16.0 * CATALAN * CATALAN / pi.powi(4)) * lv * lv,
        ),
    ];
    let worst_id = identities
        .iter()
        .map(|(a, b)| (a / b - 1.0).abs())
        .fold(0.0, f64::max);
    let secs = start.elapsed().as_secs_f64();
    report(
        5,
        worst <= 1e-6 && worst_id <= 1e-12,
        format!("quadrature vs moments {worst:.1e} (<= 1e-6), identities {worst_id:.1e} (<= 1e-12), {secs:.3} s"),
    );
}

fn csv_bytes(s: &TickSeries) -> Vec<u8> {
    let mut v = Vec::new();
    s.write_csv(&mut v).unwrap();
    v
}

#[test]
fn criterion_06_representation_equivalence() {
    let cases = [
        ("plain", plain_params(SUITE_SEED, 10_000)),
        (
            "trend d=1.25 M=1",
            trend_params(SUITE_SEED, 10_000, Trend::Constant(1.25), 1),
        ),
        (
            "trend d=-1 M=10",
            trend_params(SUITE_SEED, 10_000, Trend::Constant(-1.0), 10),
        ),
    ];
    let mut detail = Vec::new();
    let mut ok = true;
    for (name, p) in cases {
        let a = csv_bytes(&run(&p, Representation::Dealer).unwrap());
        let b = csv_bytes(&run(&p, Representation::Reduced).unwrap());
        let same = a == b;
        ok &= same;
        detail.push(format!(
            "{name}: {}",
            if same { "identical" } else { "differ" }
        ));
    }
    report(6, ok, detail.join(", "));
}

#[test]
fn criterion_07_exponent_solver() {
    let l = law();
    let d = solve_trend_coefficient(3.0, &l).unwrap();
    let back = solve_tail_exponent(d, &l).unwrap();
    let ok = (d - 1.2531).abs() <= 1e-3 && (back - 3.0).abs() <= 1e-8;
    report(
        7,
        ok,
        format!(
            "|d| = {d:.6} (1.2531 +-1e-3), round trip error {:.1e} (<= 1e-8)",
            (back - 3.0).abs()
        ),
    );
}

#[test]
fn criterion_08_trend_power_law() {
    let s = run(
        &trend_params(SUITE_SEED, 1_000_000, Trend::Constant(1.25), 1),
        Representation::Reduced,
    )
    .unwrap();
    let h = hill_tail_exponent(&s.abs_dprices(), 0.01).unwrap();
    report(
        8,
        (2.5..=3.5).contains(&h.exponent),
        format!("Hill exponent {:.3} in [2.5, 3.5]", h.exponent),
    );
}

#[test]
fn criterion_09_regression_slope() {
    let s = run(
        &trend_params(SUITE_SEED, 100_000, Trend::Constant(-1.0), 1),
        Representation::Reduced,
    )
    .unwrap();
    let f = puck_slope(&s.ticks, 1).unwrap();
    let ok = within(f.slope, -0.5, 0.20) && within(f.b_est, 1.0, 0.20);
    report(
        9,
        ok,
        format!(
            "slope {:.4} (-0.5 +-20%), b {:.4} (1.0 +-20%)",
            f.slope, f.b_est
        ),
    );
}

#[test]
fn criterion_10_potential_signs() {
    let schedule = potential_schedule();
    let base = trend_params(SUITE_SEED, 0, Trend::NONE, POTENTIAL_DEPTH);
    let s = run_schedule(&base, &schedule).unwrap();
    let fits = segment_fits(&s, &schedule, POTENTIAL_DEPTH, POTENTIAL_WINDOW).unwrap();
    let (st, fl, un, asym) = (
        &fits[0].potential,
        &fits[1].potential,
        &fits[2].potential,
        &fits[3].potential,
    );
    let ok = st.a > 0.0
        && fl.a.abs() < fl.noise_floor()
        && un.a < 0.0
        && asym.a_left * asym.a_right < 0.0;
    report(
        10,
        ok,
        format!(
            "a(d=-1) {:.4} > 0, |a(d=0)| {:.4} < {:.4}, a(d=+1) {:.4} < 0, asymmetric left {:.4} right {:.4}",
            st.a,
            fl.a.abs(),
            fl.noise_floor(),
            un.a,
            asym.a_left,
            asym.a_right
        ),
    );
}

#[test]
fn criterion_11_diffusion_ratio() {
    let contrarian = run(
        &trend_params(SUITE_SEED, 100_000, Trend::Constant(-1.0), 10),
        Representation::Reduced,
    )
    .unwrap();
    let neutral = run(
        &trend_params(SUITE_SEED, 100_000, Trend::Constant(0.0), 10),
        Representation::Reduced,
    )
    .unwrap();
    let r = sigma_ratio(&contrarian.prices(), &neutral.prices(), &SIGMA_RATIO_LAGS).unwrap();
    let want = diffusion_ratio(-1.0, &law()).unwrap();
    report(
        11,
        within(r, 0.667, 0.15),
        format!("sigma ratio {r:.4} (0.667 +-15%, exact {want:.4})"),
    );
}

#[test]
fn criterion_12_bubble_regime() {
    let s = run(
        &trend_params(SUITE_SEED, 2000, Trend::Constant(2.0), 10),
        Representation::Reduced,
    )
    .unwrap();
    let m = bubble_metrics(&s, 100);
    let diverges = matches!(
        diffusion_ratio(2.0, &law()),
        Err(Error::BubbleRegime { .. })
    );
    let ok = m.above_fraction >= 0.95 && m.r_squared >= 0.9 && diverges;
    report(
        12,
        ok,
        format!(
            "windows above start {:.3} (>= 0.95), log-fit R2 {:.3} (>= 0.9), bubble error {}",
            m.above_fraction, m.r_squared, diverges
        ),
    );
}

#[test]
fn criterion_13_clustering() {
    let p = modulated_params(SUITE_SEED, 50_000);
    let s = run(&p, Representation::Reduced).unwrap();
    let c = clustering_stats(&s, p.tau).unwrap();
    let exp_tail = (-5.0f64).exp();
    let ok = c.interval_cv > 1.0 && c.ccdf_at_5_means > exp_tail && within(c.e_mean, 1.0, 0.05);
    report(
        13,
        ok,
        format!(
            "cv {:.3} (> 1), ccdf(5 mean) {:.4} (> {exp_tail:.4}), mean e {:.4} (1 +-5%)",
            c.interval_cv, c.ccdf_at_5_means, c.e_mean
        ),
    );
}
