//! Benchmark-only crate; see benches/fidelity.rs.
