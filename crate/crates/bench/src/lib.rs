//! Benchmarks for `bilv-core` live in `benches/`.
