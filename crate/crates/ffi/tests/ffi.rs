//! Exercises the C ABI exactly as a foreign caller would: through raw
//! pointers, status codes, and the thread-local error message.

use fqc_ffi::*;
use std::ffi::{CStr, CString};
use std::ptr;

fn last_error() -> String {
    unsafe { CStr::from_ptr(fqc_last_error()).to_string_lossy().into_owned() }
}

#[test]
fn builtin_roundtrip_and_zero_getters() {
    unsafe {
        let name = CString::new("poisson").unwrap();
        let mut pair: *mut FqcPair = ptr::null_mut();
        assert!(fqc_pair_builtin(name.as_ptr(), &mut pair) == FqcStatus::Ok);
        assert_eq!(fqc_pair_arity(pair), 1);

        let mut xi = [0.0f64; 4];
        assert_eq!(fqc_pair_default_freq(pair, xi.as_mut_ptr(), xi.len()), 1);
        assert_eq!(xi[0], 1.0);
        // cap = 0 only queries the count
        assert_eq!(fqc_pair_default_freq(pair, ptr::null_mut(), 0), 1);

        let mut zeros: *mut FqcZeroList = ptr::null_mut();
        let status = fqc_zeros_find(pair, xi.as_ptr(), 1, 20.0, 32, &mut zeros);
        assert!(status == FqcStatus::Ok, "{}", last_error());
        assert_eq!(fqc_zeros_len(zeros), 7); // 2 pi n, |n| <= 3
        let tau = std::f64::consts::TAU;
        for i in 0..7 {
            let g = fqc_zeros_gamma(zeros, i);
            assert!((g - tau * (g / tau).round()).abs() < 1e-9);
            assert_eq!(fqc_zeros_multiplicity(zeros, i), 1);
            assert!(fqc_zeros_residual(zeros, i) < 1e-10);
        }
        // Out-of-range getters degrade instead of faulting.
        assert!(fqc_zeros_gamma(zeros, 7).is_nan());
        assert_eq!(fqc_zeros_multiplicity(zeros, 7), 0);

        fqc_zeros_free(zeros);
        fqc_pair_free(pair);
    }
}

#[test]
fn json_pair_runs_the_summation_identity() {
    let json = CString::new(
        r#"{"n": 2, "terms": [
            {"exp": [0, 0], "coeff": {"num": 1, "den": 1}},
            {"exp": [1, 0], "coeff": {"num": -1, "den": 3}},
            {"exp": [0, 2], "coeff": {"num": 1, "den": 3}},
            {"exp": [1, 2], "coeff": {"num": -1, "den": 1}}
        ], "ell": [1, 2], "eta": {"num": -1, "den": 1}}"#,
    )
    .unwrap();
    unsafe {
        let mut pair: *mut FqcPair = ptr::null_mut();
        assert!(fqc_pair_from_json(json.as_ptr(), false, &mut pair) == FqcStatus::Ok);
        assert_eq!(fqc_pair_arity(pair), 2);
        // JSON pairs carry no default frequencies.
        assert_eq!(fqc_pair_default_freq(pair, ptr::null_mut(), 0), 0);

        let xi = [1.0, std::f64::consts::SQRT_2];
        let mut report = std::mem::zeroed::<FqcSummation>();
        let status = fqc_verify_summation(pair, xi.as_ptr(), 2, 1.0, 100.0, 30, &mut report);
        assert!(status == FqcStatus::Ok, "{}", last_error());
        assert!(report.residual < report.tail_estimate + 1e-8);
        assert!(!report.relaxed);
        assert!(report.zero_count > 100);

        fqc_pair_free(pair);
    }
}

#[test]
fn stability_search_finds_the_planted_zero() {
    // 1 - 2 z is unstable; encode it as a relaxed pair to reach P via the
    // C surface.
    let json = CString::new(
        r#"{"n": 1, "terms": [
            {"exp": [0], "coeff": {"num": 1, "den": 1}},
            {"exp": [1], "coeff": {"num": -2, "den": 1}}
        ], "ell": [1], "eta": {"num": -1, "den": 2}}"#,
    )
    .unwrap();
    unsafe {
        let mut pair: *mut FqcPair = ptr::null_mut();
        let status = fqc_pair_from_json(json.as_ptr(), true, &mut pair);
        assert!(status == FqcStatus::Ok, "{}", last_error());
        let mut outcome = std::mem::zeroed::<FqcStabilityOutcome>();
        assert!(fqc_stability_search(pair, 100_000, 7, &mut outcome) == FqcStatus::Ok);
        assert!(outcome.counterexample_found);
        assert!(outcome.witness_value < 1e-9);
        fqc_pair_free(pair);

        // A stable builtin comes back clean.
        let name = CString::new("lasso").unwrap();
        let mut stable: *mut FqcPair = ptr::null_mut();
        assert!(fqc_pair_builtin(name.as_ptr(), &mut stable) == FqcStatus::Ok);
        assert!(fqc_stability_search(stable, 50_000, 7, &mut outcome) == FqcStatus::Ok);
        assert!(!outcome.counterexample_found);
        assert!(outcome.min_modulus > 0.0);
        fqc_pair_free(stable);
    }
}

#[test]
fn errors_set_status_and_message() {
    unsafe {
        let mut pair: *mut FqcPair = ptr::null_mut();

        // Unknown builtin.
        let name = CString::new("nope").unwrap();
        assert!(fqc_pair_builtin(name.as_ptr(), &mut pair) == FqcStatus::InvalidInput);
        assert!(last_error().contains("unknown builtin"), "{}", last_error());

        // Null arguments.
        assert!(fqc_pair_builtin(ptr::null(), &mut pair) == FqcStatus::NullArgument);
        assert!(fqc_pair_builtin(name.as_ptr(), ptr::null_mut()) == FqcStatus::NullArgument);

        // Malformed JSON.
        let bad = CString::new("{not json").unwrap();
        assert!(fqc_pair_from_json(bad.as_ptr(), false, &mut pair) == FqcStatus::InvalidInput);

        // Arity mismatch surfaces as invalid input with a message.
        let name = CString::new("lasso").unwrap();
        assert!(fqc_pair_builtin(name.as_ptr(), &mut pair) == FqcStatus::Ok);
        let xi = [1.0f64];
        let mut zeros: *mut FqcZeroList = ptr::null_mut();
        let status = fqc_zeros_find(pair, xi.as_ptr(), 1, 10.0, 32, &mut zeros);
        assert!(status == FqcStatus::InvalidInput);
        assert!(last_error().contains("arity"), "{}", last_error());

        // Hopeless truncation is a numerical refusal, not invalid input.
        let xi = [1.0, std::f64::consts::SQRT_2];
        let mut report = std::mem::zeroed::<FqcSummation>();
        let status = fqc_verify_summation(pair, xi.as_ptr(), 2, 1.0, 1.0, 2, &mut report);
        assert!(status == FqcStatus::Numerical, "{}", last_error());

        fqc_pair_free(pair);
        // Freeing null is a no-op.
        fqc_pair_free(ptr::null_mut());
        fqc_zeros_free(ptr::null_mut());
    }
}

#[test]
fn generated_header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/fqc.h"))
        .expect("cbindgen header exists after build");
    for needle in [
        "typedef struct FqcPair FqcPair;",
        "typedef struct FqcZeroList FqcZeroList;",
        "FQC_STATUS_OK",
        "fqc_pair_builtin",
        "fqc_zeros_find",
        "fqc_verify_summation",
        "fqc_stability_search",
        "fqc_last_error",
    ] {
        assert!(header.contains(needle), "header is missing {needle}");
    }
}
