//! Acceptance criteria, one line each. Runs without the libtest harness so the
//! table is printed even when everything passes.

use std::process::ExitCode;
use std::time::Instant;

use walklab::verify::{run_criterion, Suite};

fn main() -> ExitCode {
    let mut failed = Vec::new();
    for &id in Suite::All.criteria() {
        let start = Instant::now();
        let outcome = run_criterion(id);
        println!("{outcome} [{:.2}s]", start.elapsed().as_secs_f64());
        if !outcome.passed {
            failed.push(outcome.name);
        }
    }
    if failed.is_empty() {
        println!("acceptance: {} of {} criteria passed", Suite::All.criteria().len(), Suite::All.criteria().len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed {}", failed.join(", "));
        ExitCode::FAILURE
    }
}
