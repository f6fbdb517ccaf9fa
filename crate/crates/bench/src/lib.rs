//! Criterion benchmarks for the evaluator and simulator live in `benches/`.
