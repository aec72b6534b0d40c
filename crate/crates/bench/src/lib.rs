//! Benchmark-only crate; the measurements live in `benches/transport.rs`.
//! Run them with `cargo bench -p nemslab-bench`.
