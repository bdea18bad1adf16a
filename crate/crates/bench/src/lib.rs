//! Criterion benchmarks for compmu; see `benches/`.
