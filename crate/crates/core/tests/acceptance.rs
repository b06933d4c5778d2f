//! Acceptance suite: one PASS/FAIL line per criterion on the full grid.
//! Exits nonzero if any criterion fails.

use std::process::ExitCode;

use projperm::acceptance::{run, Grid, CRITERIA};

fn main() -> ExitCode {
    let mut failed = 0;
    for id in 1..=CRITERIA.len() as u32 {
        let r = run(id, Grid::Full);
        println!("{r}");
        failed += usize::from(!r.passed);
    }
    println!("acceptance: {} passed, {failed} failed", CRITERIA.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
