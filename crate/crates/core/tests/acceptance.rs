//! Acceptance suite: one test per verification criterion, printing the
//! measured values each pass/fail judgement rests on. Identical to what
//! `spincat verify` runs.
//!
//! Criteria 4 and 5 compare propagated dynamics against closed-form decay
//! laws exactly as printed; direct numerics of the master equation (checked
//! against the dense superoperator exponential) disagree with two of those
//! printed coefficients, so those two tests fail by design rather than
//! loosening the comparison. The details they print include diagnostic fits
//! on short windows, which do land on the closed forms.

use spincat::cli::verify::{self, CriterionOutcome};

fn assert_criterion(outcome: CriterionOutcome) {
    println!("{}", outcome.summary_line());
    for line in &outcome.details {
        println!("    {line}");
    }
    assert!(
        outcome.pass,
        "criterion {} {} failed:\n{}",
        outcome.id,
        outcome.name,
        outcome.details.join("\n")
    );
}

#[test]
fn criterion_1_polar_pair_exact_decay() {
    assert_criterion(verify::criterion_1_polar_pair_exact_decay());
}

#[test]
fn criterion_2_initial_slope_law() {
    assert_criterion(verify::criterion_2_initial_slope_law());
}

#[test]
fn criterion_3_fast_decoherence_rate() {
    assert_criterion(verify::criterion_3_fast_decoherence_rate());
}

#[test]
fn criterion_4_mirror_pair_longevity() {
    assert_criterion(verify::criterion_4_mirror_pair_longevity());
}

#[test]
fn criterion_5_diagonal_state_decay() {
    assert_criterion(verify::criterion_5_diagonal_state_decay());
}

#[test]
fn criterion_6_dispersive_cat_generation() {
    assert_criterion(verify::criterion_6_dispersive_cat_generation());
}

#[test]
fn criterion_7_preparation_pipeline() {
    assert_criterion(verify::criterion_7_preparation_pipeline());
}

#[test]
fn criterion_8_propagator_oracle_equivalence() {
    assert_criterion(verify::criterion_8_propagator_oracle_equivalence());
}

#[test]
fn criterion_9_property_suite() {
    assert_criterion(verify::criterion_9_property_suite());
}
