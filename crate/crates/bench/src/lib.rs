//! Criterion benchmarks for the imoea crate live under `benches/`.
