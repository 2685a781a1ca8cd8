//! Acceptance checks for `levelcost`. The checks live in
//! `tests/acceptance.rs`; run them with `cargo test -p levelcost-validation`.
