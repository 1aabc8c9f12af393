//! Criterion benchmarks for the symcc kernels live under `benches/`.
