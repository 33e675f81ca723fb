//! Acceptance suite. Prints one line per criterion.
//!
//! Criteria in `KNOWN_FAILURES` still run and still print FAIL; they do not
//! fail the test run because the measured behaviour is the documented result.
//! Set `GIRG_ACCEPTANCE_ONLY=1,2,6` to run a subset, and
//! `GIRG_ACCEPTANCE_OUT=dir` to keep the sweep records and plots.

use std::path::PathBuf;
use std::process::ExitCode;

use girg_core::harness::{Acceptance, CRITERIA};

const KNOWN_FAILURES: &[usize] = &[7];

fn main() -> ExitCode {
    let ids: Vec<usize> = match std::env::var("GIRG_ACCEPTANCE_ONLY") {
        Ok(list) => list
            .split(',')
            .filter_map(|s| s.trim().parse().ok())
            .collect(),
        Err(_) => (1..=CRITERIA).collect(),
    };
    let out = std::env::var_os("GIRG_ACCEPTANCE_OUT").map(PathBuf::from);
    let mut acceptance = Acceptance::new(out.as_deref());
    let mut unexpected = Vec::new();
    for id in ids {
        let outcome = acceptance.run(id);
        let known = !outcome.pass && KNOWN_FAILURES.contains(&id);
        println!("{outcome}{}", if known { " [known failure]" } else { "" });
        if !outcome.pass && !known {
            unexpected.push(id);
        }
    }
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        eprintln!("unexpected failures: {unexpected:?}");
        ExitCode::FAILURE
    }
}
