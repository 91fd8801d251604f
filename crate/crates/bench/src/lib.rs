//! Criterion benchmarks for the wulffkit kernels live in `benches/`.
