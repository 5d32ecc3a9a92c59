//! Host package for the `acceptance` test target. Run it with
//! `cargo test -p tritangle-verify --test acceptance -- --nocapture`.
