//! C ABI for the fqc library: opaque handles, status codes, and a
//! thread-local error message.
//!
//! Conventions:
//! - Every fallible call returns an [`FqcStatus`]; `FQC_STATUS_OK` is 0.
//!   On any other status, [`fqc_last_error`] holds a human-readable
//!   message until the next failing call on the same thread.
//! - Handles (`FqcPair`, `FqcZeroList`) are created behind out-pointers
//!   and released with their `_free` function; `_free(NULL)` is a no-op.
//!   Handles are immutable after creation and safe to share across
//!   threads for reads.
//! - Getters on indexed data return NaN (or 0 for counts) when the index
//!   is out of range rather than faulting.

use fqc::dirichlet::{find_zeros, DirichletError, DirichletSeries, FrequencyVec, Side, ZeroList};
use fqc::io::pair_from_json;
use fqc::measure::{verify_summation, MeasureError, TestFunction};
use fqc::stability::{falsify_stability, StabilityVerdict};
use fqc::{builtins, StablePair};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Result of every fallible API call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum FqcStatus {
    /// Success.
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// The input was rejected (unknown builtin, malformed JSON, arity
    /// mismatch, invalid parameters).
    InvalidInput = 2,
    /// The computation refused to answer at the requested accuracy
    /// (window too coarse, truncation tail too large).
    Numerical = 3,
    /// An internal invariant failed; the operation was rolled back.
    Internal = 4,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn fail(status: FqcStatus, message: String) -> FqcStatus {
    let message = CString::new(message).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = message);
    status
}

/// Message for the most recent non-OK status on this thread. The pointer
/// stays valid until the next failing call on the same thread. Never null.
#[no_mangle]
pub extern "C" fn fqc_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// A stable polynomial pair plus the default frequencies of the builtin
/// it came from (empty for pairs loaded from JSON).
pub struct FqcPair {
    inner: StablePair,
    default_freq: Vec<f64>,
}

/// Zeros of F(s) on a window of the imaginary axis.
pub struct FqcZeroList {
    inner: ZeroList,
}

fn status_of_dirichlet(e: &DirichletError) -> FqcStatus {
    match e {
        DirichletError::WindowTooCoarse { .. } | DirichletError::ContourHitsZero => {
            FqcStatus::Numerical
        }
        _ => FqcStatus::InvalidInput,
    }
}

fn status_of_measure(e: &MeasureError) -> FqcStatus {
    match e {
        MeasureError::TailTooLarge(_) => FqcStatus::Numerical,
        MeasureError::Zeros(inner) => status_of_dirichlet(inner),
        _ => FqcStatus::InvalidInput,
    }
}

/// Run `body` with panics converted to `Internal` so unwinding never
/// crosses the C boundary.
fn guarded(body: impl FnOnce() -> FqcStatus) -> FqcStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(FqcStatus::Internal, "internal panic".into()),
    }
}

unsafe fn read_utf8<'a>(ptr: *const c_char) -> Result<&'a str, FqcStatus> {
    if ptr.is_null() {
        return Err(fail(FqcStatus::NullArgument, "null string argument".into()));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| fail(FqcStatus::InvalidInput, "string is not UTF-8".into()))
}

/// Create a builtin pair by name: "poisson", "lasso", "lee-yang",
/// "spectral", or "spectral-phase". On success `*out` owns the handle.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fqc_pair_builtin(name: *const c_char, out: *mut *mut FqcPair) -> FqcStatus {
    guarded(|| {
        if out.is_null() {
            return fail(FqcStatus::NullArgument, "null out pointer".into());
        }
        let name = match read_utf8(name) {
            Ok(s) => s,
            Err(status) => return status,
        };
        match builtins::by_name(name) {
            Some((pair, freq)) => {
                *out = Box::into_raw(Box::new(FqcPair {
                    inner: pair,
                    default_freq: freq.as_slice().to_vec(),
                }));
                FqcStatus::Ok
            }
            None => fail(
                FqcStatus::InvalidInput,
                format!(
                    "unknown builtin '{name}' (known: {})",
                    builtins::PAIR_NAMES.join(", ")
                ),
            ),
        }
    })
}

/// Parse a pair from its JSON form (P's terms plus "ell" and "eta").
/// `allow_relaxed` admits pairs whose eta leaves Q(0) != 1.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fqc_pair_from_json(
    json: *const c_char,
    allow_relaxed: bool,
    out: *mut *mut FqcPair,
) -> FqcStatus {
    guarded(|| {
        if out.is_null() {
            return fail(FqcStatus::NullArgument, "null out pointer".into());
        }
        let json = match read_utf8(json) {
            Ok(s) => s,
            Err(status) => return status,
        };
        match pair_from_json(json, allow_relaxed) {
            Ok(pair) => {
                *out = Box::into_raw(Box::new(FqcPair {
                    inner: pair,
                    default_freq: Vec::new(),
                }));
                FqcStatus::Ok
            }
            Err(e) => fail(FqcStatus::InvalidInput, e.to_string()),
        }
    })
}

/// Release a pair handle. Null is ignored.
///
/// # Safety
/// `pair` must be a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fqc_pair_free(pair: *mut FqcPair) {
    if !pair.is_null() {
        drop(Box::from_raw(pair));
    }
}

/// Number of variables of the pair's polynomials; 0 for null.
///
/// # Safety
/// `pair` must be a live handle from this library or null.
#[no_mangle]
pub unsafe extern "C" fn fqc_pair_arity(pair: *const FqcPair) -> usize {
    pair.as_ref().map_or(0, |p| p.inner.n())
}

/// Copy the builtin's default frequencies into `out` (up to `cap` values)
/// and return how many the pair carries. Pairs loaded from JSON have
/// none and return 0. Call with `cap = 0` to query the count.
///
/// # Safety
/// `pair` must be a live handle or null; `out` must point to at least
/// `cap` doubles when `cap > 0`.
#[no_mangle]
pub unsafe extern "C" fn fqc_pair_default_freq(
    pair: *const FqcPair,
    out: *mut f64,
    cap: usize,
) -> usize {
    let Some(pair) = pair.as_ref() else { return 0 };
    let n = pair.default_freq.len();
    if !out.is_null() {
        for (i, &x) in pair.default_freq.iter().take(cap).enumerate() {
            *out.add(i) = x;
        }
    }
    n
}

/// Find the zeros of F(s) = P(e^{-xi_1 s}, ..., e^{-xi_n s}) for
/// Im s in [-halfwidth, halfwidth]. `xi` must hold `xi_len` positive
/// frequencies matching the pair's arity. `oversample` is the grid
/// density per period (32 is a good default). On success `*out` owns the
/// list.
///
/// # Safety
/// `pair` must be a live handle; `xi` must point to `xi_len` doubles;
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fqc_zeros_find(
    pair: *const FqcPair,
    xi: *const f64,
    xi_len: usize,
    halfwidth: f64,
    oversample: u32,
    out: *mut *mut FqcZeroList,
) -> FqcStatus {
    guarded(|| {
        if pair.is_null() || xi.is_null() || out.is_null() {
            return fail(FqcStatus::NullArgument, "null argument".into());
        }
        let pair = &(*pair).inner;
        let xi = std::slice::from_raw_parts(xi, xi_len);
        let freq = match FrequencyVec::new(xi.to_vec()) {
            Ok(f) => f,
            Err(e) => return fail(FqcStatus::InvalidInput, e.to_string()),
        };
        let series = match DirichletSeries::new(pair, &freq, Side::P) {
            Ok(s) => s,
            Err(e) => return fail(status_of_dirichlet(&e), e.to_string()),
        };
        match find_zeros(&series, (-halfwidth.abs(), halfwidth.abs()), oversample) {
            Ok(zeros) => {
                *out = Box::into_raw(Box::new(FqcZeroList { inner: zeros }));
                FqcStatus::Ok
            }
            Err(e) => fail(status_of_dirichlet(&e), e.to_string()),
        }
    })
}

/// Release a zero list. Null is ignored.
///
/// # Safety
/// `list` must be a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fqc_zeros_free(list: *mut FqcZeroList) {
    if !list.is_null() {
        drop(Box::from_raw(list));
    }
}

/// Number of zeros in the list; 0 for null.
///
/// # Safety
/// `list` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn fqc_zeros_len(list: *const FqcZeroList) -> usize {
    list.as_ref().map_or(0, |l| l.inner.len())
}

/// Position of the i-th zero (ascending); NaN out of range.
///
/// # Safety
/// `list` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn fqc_zeros_gamma(list: *const FqcZeroList, i: usize) -> f64 {
    list.as_ref()
        .and_then(|l| l.inner.gammas().get(i).copied())
        .unwrap_or(f64::NAN)
}

/// Multiplicity of the i-th zero; 0 out of range.
///
/// # Safety
/// `list` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn fqc_zeros_multiplicity(list: *const FqcZeroList, i: usize) -> u32 {
    list.as_ref()
        .and_then(|l| l.inner.multiplicities().get(i).copied())
        .unwrap_or(0)
}

/// |F| at the i-th zero after polishing; NaN out of range.
///
/// # Safety
/// `list` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn fqc_zeros_residual(list: *const FqcZeroList, i: usize) -> f64 {
    list.as_ref()
        .and_then(|l| l.inner.residuals().get(i).copied())
        .unwrap_or(f64::NAN)
}

/// Outcome of one summation-identity check.
#[repr(C)]
pub struct FqcSummation {
    /// Sum of multiplicity-weighted test values over the zeros.
    pub lhs: f64,
    /// Real and imaginary parts of the truncated coefficient side.
    pub rhs_re: f64,
    pub rhs_im: f64,
    /// |lhs - rhs|.
    pub residual: f64,
    /// Certified bound on the combined truncation error.
    pub tail_estimate: f64,
    /// Zeros used inside the window.
    pub zero_count: u64,
    /// Whether the pair runs under the relaxed normalization.
    pub relaxed: bool,
}

/// Check the summation identity with a Gaussian test function of width
/// `sigma`, zero window halfwidth `window`, and coefficient truncation
/// `degree_max`. Fails with `FQC_STATUS_NUMERICAL` when the certified
/// tail exceeds its budget.
///
/// # Safety
/// `pair` must be a live handle; `xi` must point to `xi_len` doubles;
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fqc_verify_summation(
    pair: *const FqcPair,
    xi: *const f64,
    xi_len: usize,
    sigma: f64,
    window: f64,
    degree_max: u32,
    out: *mut FqcSummation,
) -> FqcStatus {
    guarded(|| {
        if pair.is_null() || xi.is_null() || out.is_null() {
            return fail(FqcStatus::NullArgument, "null argument".into());
        }
        let pair = &(*pair).inner;
        let xi = std::slice::from_raw_parts(xi, xi_len);
        let freq = match FrequencyVec::new(xi.to_vec()) {
            Ok(f) => f,
            Err(e) => return fail(FqcStatus::InvalidInput, e.to_string()),
        };
        match verify_summation(
            pair,
            &freq,
            TestFunction::Gaussian { sigma },
            window,
            degree_max,
        ) {
            Ok(report) => {
                *out = FqcSummation {
                    lhs: report.lhs,
                    rhs_re: report.rhs.re,
                    rhs_im: report.rhs.im,
                    residual: report.residual,
                    tail_estimate: report.tail_estimate,
                    zero_count: report.zero_count as u64,
                    relaxed: report.relaxed,
                };
                FqcStatus::Ok
            }
            Err(e) => fail(status_of_measure(&e), e.to_string()),
        }
    })
}

/// Outcome of one stability falsification run.
#[repr(C)]
pub struct FqcStabilityOutcome {
    /// True when an interior polydisk zero was found.
    pub counterexample_found: bool,
    /// Smallest |P| seen strictly inside the polydisk.
    pub min_modulus: f64,
    /// |P| at the witness; NaN when no counterexample was found.
    pub witness_value: f64,
    /// Evaluation budget actually spent.
    pub samples_used: u64,
}

/// Random search for an interior zero of the pair's P over the closed
/// unit polydisk. Deterministic for a fixed (budget, seed).
///
/// # Safety
/// `pair` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fqc_stability_search(
    pair: *const FqcPair,
    budget: u64,
    seed: u64,
    out: *mut FqcStabilityOutcome,
) -> FqcStatus {
    guarded(|| {
        if pair.is_null() || out.is_null() {
            return fail(FqcStatus::NullArgument, "null argument".into());
        }
        match falsify_stability((*pair).inner.p(), budget, seed) {
            Ok(report) => {
                *out = FqcStabilityOutcome {
                    counterexample_found: report.verdict == StabilityVerdict::CounterexampleFound,
                    min_modulus: report.min_modulus,
                    witness_value: report.witness_value.unwrap_or(f64::NAN),
                    samples_used: report.samples_used,
                };
                FqcStatus::Ok
            }
            Err(e) => fail(FqcStatus::InvalidInput, e.to_string()),
        }
    })
}
