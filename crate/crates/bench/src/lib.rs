//! Bench-only crate; see benches/engine.rs.
