//! Randomized acceptance checks at full scale.

use farkas_core::suite::{self, CheckOutcome, Scale};

const SEED: u64 = 7;

fn assert_pass(out: CheckOutcome) {
    println!("{}", out.line());
    assert!(out.passed, "{}", out.line());
}

#[test]
fn golden_example_values() {
    assert_pass(suite::example1_golden());
}

#[test]
fn closure_of_k_is_support_epigraph_of_a() {
    assert_pass(suite::closure_matches_delta_a(SEED, &Scale::full()));
}

#[test]
fn conjugates_of_sums() {
    assert_pass(suite::conjugate_sum_identities(SEED, &Scale::full()));
}

#[test]
fn biconjugation_and_recession_laws() {
    assert_pass(suite::conjugate_invariants(SEED, &Scale::full()));
}

#[test]
fn forward_certificates() {
    assert_pass(suite::certificate_round_trip(SEED, &Scale::full()));
}

#[test]
fn open_cone_is_detected() {
    assert_pass(suite::open_cone_detection());
}

#[test]
fn hidden_assumption_identity() {
    assert_pass(suite::hidden_assumption_characterization(SEED, &Scale::full()));
}

#[test]
fn optimality_matches_direct_solution() {
    assert_pass(suite::optimality_cross_validation(SEED, &Scale::full()));
}

#[test]
fn consistency_routes_agree() {
    assert_pass(suite::consistency_routes(SEED, &Scale::full()));
}

#[test]
fn other_seeds_also_pass() {
    for seed in [1, 2024] {
        for out in suite::run_all(seed, &Scale::quick()) {
            assert_pass(out);
        }
    }
}
