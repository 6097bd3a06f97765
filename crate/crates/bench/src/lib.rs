//! Criterion benchmarks for `rikitake-core` live under `benches/`.
