//! Criterion benchmarks for `gupent-core`; see `benches/gupent.rs`.
//!
//! Run with `cargo bench -p gupent-bench`.
