//! Every acceptance criterion at its stated tolerance, one line each.
//!
//! Runs without the libtest harness so the lines are always printed; the
//! process exits non-zero if any criterion fails.

use std::process::ExitCode;

use liftoff_lab::Criterion;
use rayon::prelude::*;

fn main() -> ExitCode {
    let mut checks: Vec<_> = Criterion::ALL.par_iter().map(|c| c.check()).collect();
    checks.sort_by_key(|c| c.criterion);

    println!("\nacceptance criteria");
    for c in &checks {
        println!("{}", c.line());
    }
    let failed: Vec<usize> = checks
        .iter()
        .filter(|c| !c.passed())
        .map(|c| c.criterion.number())
        .collect();
    println!(
        "acceptance: {} of {} passed{}",
        checks.len() - failed.len(),
        checks.len(),
        if failed.is_empty() {
            String::new()
        } else {
            format!("; failed: {failed:?}")
        }
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
