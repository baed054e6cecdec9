//! One pass/fail line per acceptance criterion, at full scale. Runs without the
//! libtest harness so the lines are never captured.

use std::process::Command;

use farkas_core::suite::{self, CheckOutcome, Scale};

const SEED: u64 = 42;

fn selftest_bytes() -> (Vec<u8>, bool) {
    let out = Command::new(env!("CARGO_BIN_EXE_farkas"))
        .args(["selftest", "--seed", "42", "--json"])
        .output()
        .expect("binary runs");
    (out.stdout, out.status.success())
}

fn determinism() -> CheckOutcome {
    let (a, ok_a) = selftest_bytes();
    let (b, ok_b) = selftest_bytes();
    let identical = a == b && !a.is_empty();
    CheckOutcome {
        id: 10,
        name: "selftest --seed 42 reports are byte-identical",
        passed: identical && ok_a && ok_b,
        cases: 2,
        detail: match (identical, ok_a && ok_b) {
            (true, true) => String::new(),
            (false, _) => "reports differ".into(),
            (true, false) => "selftest failed".into(),
        },
    }
}

fn main() {
    let mut outcomes = suite::run_all(SEED, &Scale::full());
    outcomes.push(determinism());
    for out in &outcomes {
        println!("{}", out.line());
    }
    let failed: Vec<u8> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    assert_eq!(outcomes.len(), 10);
    if !failed.is_empty() {
        eprintln!("failing criteria: {failed:?}");
        std::process::exit(1);
    }
}
