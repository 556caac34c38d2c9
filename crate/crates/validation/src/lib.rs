//! Holds the `acceptance` test target; run it with
//! `cargo test -p gpctest-validation --test acceptance`.
