//! Acceptance criteria of the strip laboratory as a standalone test target.
//!
//! `cargo test -p stripspec-suite --test acceptance` prints
//! one pass/fail line per criterion; `stripspec verify` runs the same checks.

pub use stripspec_core::verify::{run, run_all, CriterionOutcome, VerifyOptions, CRITERIA};
