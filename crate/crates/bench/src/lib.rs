//! Criterion benchmarks for `thurston-core`; see `benches/`.
