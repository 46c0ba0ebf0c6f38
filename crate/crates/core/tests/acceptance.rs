//! One line per acceptance criterion; exits nonzero if any fails.

use std::process::ExitCode;

use lsl_core::acceptance::run_all;

const SEED: u64 = 20240917;

fn main() -> ExitCode {
    let results = run_all(SEED);
    for r in &results {
        println!("{r}");
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!("acceptance: {} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 && results.len() == 8 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
