//! Acceptance gate: every named criterion from `fqc::criteria` must pass.
//!
//! Each test prints exactly one PASS/FAIL line (visible with
//! `--nocapture`, and always on failure) so the suite doubles as a
//! human-readable report. The same checks back the CLI's `reproduce-all`.

use fqc::criteria;

fn gate(id: usize) {
    let r = criteria::run(id);
    println!(
        "{} criterion {:2} {:<24} [{:6.2}s] {}",
        if r.pass { "PASS" } else { "FAIL" },
        r.id,
        r.name,
        r.seconds,
        r.detail
    );
    assert!(r.pass, "criterion {} ({}): {}", r.id, r.name, r.detail);
}

#[test]
fn criterion_01_poisson_reduction() {
    gate(1);
}

#[test]
fn criterion_02_coefficient_cross_check() {
    gate(2);
}

#[test]
fn criterion_03_summation_residual() {
    gate(3);
}

#[test]
fn criterion_04_zero_structure() {
    gate(4);
}

#[test]
fn criterion_05_functional_equation() {
    gate(5);
}

#[test]
fn criterion_06_coefficient_bound() {
    gate(6);
}

#[test]
fn criterion_07_spectrum_growth() {
    gate(7);
}

#[test]
fn criterion_08_rational_collapse() {
    gate(8);
}

#[test]
fn criterion_09_irrationality_probe() {
    gate(9);
}

#[test]
fn criterion_10_curve_topology() {
    gate(10);
}

#[test]
fn criterion_11_stability_search() {
    gate(11);
}
