use std::process::ExitCode;
use std::time::Instant;

use tentropy_core::acceptance::{run, CRITERIA};

const SEED: u64 = 7;

fn main() -> ExitCode {
    let mut failed = 0;
    for (id, _) in CRITERIA {
        let start = Instant::now();
        let outcome = run(id, SEED).expect("known criterion");
        println!("{}  [{:.1}s]", outcome.line(), start.elapsed().as_secs_f64());
        if !outcome.passed {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", CRITERIA.len() - failed, CRITERIA.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
