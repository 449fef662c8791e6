//! One pass/fail line per acceptance criterion. Run with `--nocapture` to see the
//! measured values next to their tolerances.

use ris_sop::harness::{run_criterion, CriterionReport, ValidateOptions, CRITERIA};

fn check(id: u8) -> CriterionReport {
    let r = run_criterion(id, &ValidateOptions::default());
    println!("{r}");
    assert!(r.passed, "{r}");
    r
}

#[test]
fn criterion_1_theory_matches_monte_carlo() {
    check(1);
}

#[test]
fn criterion_2_monotone_in_rate_and_snr() {
    check(2);
}

#[test]
fn criterion_3_high_snr_bound_is_tight() {
    check(3);
}

#[test]
fn criterion_4_wiretap_gain_is_gamma() {
    check(4);
}

#[test]
fn criterion_5_alternating_optimization_converges() {
    check(5);
}

#[test]
fn criterion_6_optimizers_beat_baselines() {
    check(6);
}

#[test]
fn criterion_7_eavesdropper_dominance() {
    check(7);
}

#[test]
fn criterion_8_subproblem_oracles() {
    check(8);
}

#[test]
fn criterion_9_numerical_kernels() {
    check(9);
}

#[test]
fn suite_lists_every_criterion_once() {
    let ids: Vec<u8> = CRITERIA.iter().map(|c| c.0).collect();
    assert_eq!(ids, (1..=9).collect::<Vec<_>>());
}

#[test]
fn corrupted_tolerance_fails() {
    let r = run_criterion(9, &ValidateOptions { tolerance_scale: 0.0, ..ValidateOptions::default() });
    assert!(!r.passed, "{r}");
}

#[test]
fn unknown_criterion_fails() {
    assert!(!run_criterion(42, &ValidateOptions::default()).passed);
}
