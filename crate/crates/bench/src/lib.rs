//! Criterion benchmarks for the enumeration, transform and LP kernels; see
//! `benches/kernels.rs`.
