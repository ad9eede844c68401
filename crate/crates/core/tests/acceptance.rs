//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.
//!
//! `LR_SEED` overrides the base seed.

use std::process::ExitCode;

use lratio_core::reproduce::{run_all, Scale, DEFAULT_SEED};

fn main() -> ExitCode {
    let seed = std::env::var("LR_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_SEED);
    println!("acceptance suite, seed {seed}");
    let outcomes = run_all(seed, &Scale::full());
    for o in &outcomes {
        println!("{}", o.line());
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!("{} of {} criteria passed", outcomes.len() - failed, outcomes.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
