use dealer_core::engine::{modulated_c, IntervalWindow};
use dealer_core::stats::e_series;
use dealer_core::{run, Error, Representation, SimParams, SimState, TickSeries, Trend};
use proptest::prelude::*;

fn csv(s: &TickSeries) -> Vec<u8> {
    let mut buf = Vec::new();
    s.write_csv(&mut buf).unwrap();
    buf
}

#[test]
fn trend_free_model3_is_model1() {
    let m1 = SimParams::model1(0.01, 0.01).with_seed(4).with_ticks(3000);
    let m3 = m1.clone().with_trend(Trend::Constant(0.0), 7);
    let a = run(&m1, Representation::Dealer).unwrap();
    let b = run(&m3, Representation::Reduced).unwrap();
    assert_eq!(a, b);
}

#[test]
fn pinned_band_model2_is_model1() {
    // <I> pinned at L²/(2c²) = 0.5 gives c(n) = c.
    let m1 = SimParams::model1(0.01, 0.01).with_seed(8).with_ticks(3000);
    let m2 = m1.clone().with_self_modulation(150.0, 0.5, 0.5);
    let a = run(&m1, Representation::Reduced).unwrap();
    let b = run(&m2, Representation::Reduced).unwrap();
    for (x, y) in a.ticks.iter().zip(&b.ticks) {
        assert_eq!(x.n, y.n);
        assert_eq!(x.t, y.t);
        assert!((x.price - y.price).abs() < 1e-12);
    }
}

#[test]
fn model1_mean_interval_and_time_bookkeeping() {
    let p = SimParams::model1(0.01, 0.01)
        .with_seed(21)
        .with_ticks(100_000);
    let s = run(&p, Representation::Reduced).unwrap();
    let mean = s.intervals().iter().sum::<f64>() / s.len() as f64;
    assert!((mean / 0.5 - 1.0).abs() < 0.05, "{mean}");
    let total: f64 = s.intervals().iter().sum();
    let last = s.ticks.last().unwrap().t;
    assert!((total - last).abs() < 1e-9 * last);
}

#[test]
fn stepwise_trigger_and_reset() {
    let p = SimParams::model1(0.01, 0.01)
        .with_seed(3)
        .with_trend(Trend::Constant(0.8), 2);
    for repr in [Representation::Dealer, Representation::Reduced] {
        let mut st = SimState::new(p.clone(), repr).unwrap();
        let mut seen = 0;
        let mut before = st.dealer_prices();
        while seen < 300 {
            match st.step().unwrap() {
                Some(rec) => {
                    let (p1, p2) = st.dealer_prices();
                    assert_eq!(p1, p2);
                    assert_eq!(p1, rec.price);
                    assert_eq!(st.reduced_coordinates(), (0.0, 0.0));
                    seen += 1;
                }
                None => {
                    let (p1, p2) = st.dealer_prices();
                    assert!((p1 - p2).abs() < 0.01 - 1e-12, "{p1} {p2}");
                    // each dealer moves by exactly one lattice step plus drift
                    assert!(((p1 - before.0) - (p2 - before.1)).abs() < 0.02 + 1e-12);
                }
            }
            before = st.dealer_prices();
        }
    }
}

#[test]
fn records_are_consistent() {
    let p = SimParams::model1(0.01, 0.01)
        .with_seed(13)
        .with_ticks(5000)
        .with_trend(
            Trend::Asymmetric {
                up: 0.02,
                down: -0.02,
            },
            4,
        )
        .with_self_modulation(150.0, 3.0, 50.0);
    let s = run(&p, Representation::Dealer).unwrap();
    let mut prev_p = p.p0;
    let mut prev_t = 0.0;
    for (k, r) in s.ticks.iter().enumerate() {
        assert_eq!(r.n, k as u64 + 1);
        assert!(r.interval > 0.0);
        assert!(r.t > prev_t);
        assert!((r.t - prev_t - r.interval).abs() < 1e-9 * r.t);
        assert!(
            (r.dprice - (r.price - prev_p)).abs() <= 1e-13 * r.price.abs().max(prev_p.abs()),
            "{r:?}"
        );
        prev_p = r.price;
        prev_t = r.t;
    }
}

#[test]
fn window_definition_is_shared() {
    let p = SimParams::model1(0.01, 0.01)
        .with_seed(2)
        .with_ticks(2000)
        .with_self_modulation(150.0, 3.0, 50.0);
    let s = run(&p, Representation::Reduced).unwrap();
    let e = e_series(&s.ticks, p.tau);
    let mut w = IntervalWindow::new(p.tau);
    for (r, e) in s.ticks.iter().zip(e) {
        let mean = w.push(r.t, r.interval);
        assert_eq!(e, r.interval / mean);
        let c = modulated_c(
            &w,
            p.spread,
            p.clamp_lo,
            p.clamp_hi,
            p.bootstrap_mean_interval(),
        );
        assert!(c >= (5e-5f64 / 50.0).sqrt() - 1e-15 && c <= (5e-5f64 / 3.0).sqrt() + 1e-15);
    }
}

#[test]
fn positivity_halts_the_run() {
    let mut p = SimParams::model1(0.01, 0.01)
        .with_seed(1)
        .with_ticks(100_000);
    p.p0 = 0.02;
    match run(&p, Representation::Reduced) {
        Err(Error::Positivity { price, .. }) => assert!(price <= 0.0),
        other => panic!("expected positivity error, got {other:?}"),
    }
}

#[test]
fn csv_output_is_deterministic() {
    let p = SimParams::model1(0.01, 0.01)
        .with_seed(77)
        .with_ticks(500)
        .with_trend(Trend::Constant(1.0), 3);
    let a = csv(&run(&p, Representation::Dealer).unwrap());
    let b = csv(&run(&p, Representation::Dealer).unwrap());
    assert_eq!(a, b);
    let back = TickSeries::read_csv(&a[..]).unwrap();
    assert_eq!(csv(&back), a);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn representations_agree(
        seed in any::<u64>(),
        d in -1.5f64..1.5,
        m in 1usize..12,
        modulate in any::<bool>(),
        noise in prop::sample::select(vec![0.01, 0.007, 0.02]),
    ) {
        let mut p = SimParams::model1(0.01, noise)
            .with_seed(seed)
            .with_ticks(400)
            .with_trend(Trend::Constant(d), m);
        if modulate {
            p = p.with_self_modulation(150.0, 3.0, 50.0);
        }
        let a = run(&p, Representation::Dealer);
        let b = run(&p, Representation::Reduced);
        match (a, b) {
            (Ok(a), Ok(b)) => prop_assert_eq!(csv(&a), csv(&b)),
            (Err(a), Err(b)) => prop_assert_eq!(a.to_string(), b.to_string()),
            (a, b) => prop_assert!(false, "{a:?} vs {b:?}"),
        }
    }

    #[test]
    fn same_seed_same_series(seed in any::<u64>()) {
        let p = SimParams::model1(0.01, 0.01).with_seed(seed).with_ticks(200);
        prop_assert_eq!(
            run(&p, Representation::Reduced).unwrap(),
            run(&p, Representation::Reduced).unwrap()
        );
    }
}
