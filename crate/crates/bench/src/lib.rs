//! Criterion benchmarks for the detcorr workspace live in `benches/`.
