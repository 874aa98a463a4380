//! One test per acceptance criterion, full profile. Each prints its
//! PASS/FAIL line; run with `--nocapture` to see the matrix.

use hypermatch::verify::{run_criterion, Profile, DEFAULT_SEED};

fn criterion(id: &str) {
    let r = run_criterion(id, Profile::Full, DEFAULT_SEED).unwrap();
    println!("{r}");
    assert!(r.passed, "{r}");
}

#[test]
fn ac01_g_below_half() {
    criterion("AC-1");
}

#[test]
fn ac02_h_certified_and_monotone() {
    criterion("AC-2");
}

#[test]
fn ac03_bound_crossover() {
    criterion("AC-3");
}

#[test]
fn ac04_constructions_pm_free() {
    criterion("AC-4");
}

#[test]
fn ac05_fractional_exact_result() {
    criterion("AC-5");
}

#[test]
fn ac06_emc_desk_scale() {
    criterion("AC-6");
}

#[test]
fn ac07_shadow_theorem() {
    criterion("AC-7");
}

#[test]
fn ac08_stability_machinery() {
    criterion("AC-8");
}

#[test]
fn ac09_lp_duality() {
    criterion("AC-9");
}

#[test]
fn ac10_finite_n_replay() {
    criterion("AC-10");
}
