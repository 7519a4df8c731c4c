//! Benchmark-only crate; see `benches/auction.rs`.
