//! Criterion benchmarks for the word and analysis kernels live in `benches/`.
