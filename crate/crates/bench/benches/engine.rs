use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use dealer_core::{run, Representation, SimParams, SimState, Trend};
use std::hint::black_box;

fn ticks(c: &mut Criterion) {
    let mut g = c.benchmark_group("run_1000_ticks");
    g.throughput(Throughput::Elements(1000));
    let cases = [
        ("plain", SimParams::model1(0.01, 0.01)),
        (
            "modulated",
            SimParams::model1(0.01, 0.01).with_self_modulation(150.0, 3.0, 50.0),
        ),
        (
            "trend",
            SimParams::model1(0.01, 0.01).with_trend(Trend::Constant(-1.0), 10),
        ),
    ];
    for (name, p) in cases {
        let p = p.with_seed(1).with_ticks(1000);
        for repr in [Representation::Dealer, Representation::Reduced] {
            g.bench_with_input(BenchmarkId::new(name, format!("{repr:?}")), &p, |b, p| {
                b.iter(|| run(black_box(p), repr).unwrap())
            });
        }
    }
    g.finish();
}

/// Single `Δt` updates without the block fast path.
fn single_steps(c: &mut Criterion) {
    let p = SimParams::model1(0.01, 0.01).with_seed(2);
    c.bench_function("step_x10000", |b| {
        b.iter_batched_ref(
            || SimState::new(p.clone(), Representation::Reduced).unwrap(),
            |st| {
                for _ in 0..10_000 {
                    black_box(st.step().unwrap());
                }
            },
            criterion::BatchSize::SmallInput,
        )
    });
}

criterion_group!(benches, ticks, single_steps);
criterion_main!(benches);
