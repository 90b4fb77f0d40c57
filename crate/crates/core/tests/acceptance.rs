//! Runs the acceptance criteria and prints one PASS/FAIL line for each,
//! followed by its individual checks. Exits non-zero if any criterion fails.
//! Criterion ids given as arguments restrict the run.

use std::process::ExitCode;

use ncf_core::verify::{run_all, run_criterion};

fn main() -> ExitCode {
    let ids: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let reports = if ids.is_empty() {
        run_all()
    } else {
        ids.iter().map(|&id| run_criterion(id).expect("criterion id in 1..=14")).collect()
    };
    for r in &reports {
        println!("{}", r.status_line());
        for d in &r.details {
            println!("    {d}");
        }
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    println!("\nacceptance: {} passed, {failed} failed", reports.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
