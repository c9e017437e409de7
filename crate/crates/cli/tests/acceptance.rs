//! Runs the eleven acceptance criteria at exact equality and prints one
//! line per criterion, followed by any resampling log. Exits nonzero if a
//! criterion fails.

use std::process::ExitCode;

use beauville_cli::verify::{run_criterion, CRITERIA};

fn main() -> ExitCode {
    println!("\nrunning {} acceptance criteria", CRITERIA.len());
    let mut passed = 0;
    for c in &CRITERIA {
        let outcome = run_criterion(c.id, None);
        println!("{}", outcome.line());
        for note in outcome.resample_notes() {
            println!("    logged: {note}");
        }
        if outcome.passed() {
            passed += 1;
        }
    }
    println!(
        "\nacceptance: {passed} of {} criteria pass\n",
        CRITERIA.len()
    );
    if passed == CRITERIA.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
