//! Criterion benchmarks for the dealer engine and exact laws; see `benches/`.
