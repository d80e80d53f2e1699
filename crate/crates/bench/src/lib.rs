//! Criterion benchmarks for the census and linear algebra kernels; see `benches/`.
