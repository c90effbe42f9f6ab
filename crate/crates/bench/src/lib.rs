//! Criterion benchmarks for `pspin-core` live in `benches/`; run them with
//! `cargo bench -p pspin-bench`.
