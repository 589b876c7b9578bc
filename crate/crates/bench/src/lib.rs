//! Criterion benchmarks for minitori-core live in `benches/`.
