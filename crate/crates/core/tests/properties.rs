mod common;

use common::props::run_invariant;

const CASES: u32 = 200;

fn check(name: &'static str) {
    if let Err(e) = run_invariant(name, CASES).outcome {
        panic!("{name}: {e}");
    }
}

#[test]
fn length_delta() {
    check("length-delta");
}

#[test]
fn reversal_duality() {
    check("reversal-duality");
}

#[test]
fn determinism() {
    check("determinism");
}

#[test]
fn monotone_limits() {
    check("monotone-limits");
}

#[test]
fn enumeration_soundness() {
    check("enumeration-soundness");
}

#[test]
fn single_nprime() {
    check("single-nprime");
}
