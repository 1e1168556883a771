#ifndef FQC_H
#define FQC_H

/* Generated by cbindgen from the fqc-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible API call.
 */
typedef enum FqcStatus {
  /**
   * Success.
   */
  FQC_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  FQC_STATUS_NULL_ARGUMENT = 1,
  /**
   * The input was rejected (unknown builtin, malformed JSON, arity
   * mismatch, invalid parameters).
   */
  FQC_STATUS_INVALID_INPUT = 2,
  /**
   * The computation refused to answer at the requested accuracy
   * (window too coarse, truncation tail too large).
   */
  FQC_STATUS_NUMERICAL = 3,
  /**
   * An internal invariant failed; the operation was rolled back.
   */
  FQC_STATUS_INTERNAL = 4,
} FqcStatus;

/**
 * A stable polynomial pair plus the default frequencies of the builtin
 * it came from (empty for pairs loaded from JSON).
 */
typedef struct FqcPair FqcPair;

/**
 * Zeros of F(s) on a window of the imaginary axis.
 */
typedef struct FqcZeroList FqcZeroList;

/**
 * Outcome of one summation-identity check.
 */
typedef struct FqcSummation {
  /**
   * Sum of multiplicity-weighted test values over the zeros.
   */
  double lhs;
  /**
   * Real and imaginary parts of the truncated coefficient side.
   */
  double rhs_re;
  double rhs_im;
  /**
   * |lhs - rhs|.
   */
  double residual;
  /**
   * Certified bound on the combined truncation error.
   */
  double tail_estimate;
  /**
   * Zeros used inside the window.
   */
  uint64_t zero_count;
  /**
   * Whether the pair runs under the relaxed normalization.
   */
  bool relaxed;
} FqcSummation;

/**
 * Outcome of one stability falsification run.
 */
typedef struct FqcStabilityOutcome {
  /**
   * True when an interior polydisk zero was found.
   */
  bool counterexample_found;
  /**
   * Smallest |P| seen strictly inside the polydisk.
   */
  double min_modulus;
  /**
   * |P| at the witness; NaN when no counterexample was found.
   */
  double witness_value;
  /**
   * Evaluation budget actually spent.
   */
  uint64_t samples_used;
} FqcStabilityOutcome;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent non-OK status on this thread. The pointer
 * stays valid until the next failing call on the same thread. Never null.
 */
const char *fqc_last_error(void);

/**
 * Create a builtin pair by name: "poisson", "lasso", "lee-yang",
 * "spectral", or "spectral-phase". On success `*out` owns the handle.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum FqcStatus fqc_pair_builtin(const char *name, struct FqcPair **out);

/**
 * Parse a pair from its JSON form (P's terms plus "ell" and "eta").
 * `allow_relaxed` admits pairs whose eta leaves Q(0) != 1.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum FqcStatus fqc_pair_from_json(const char *json, bool allow_relaxed, struct FqcPair **out);

/**
 * Release a pair handle. Null is ignored.
 *
 * # Safety
 * `pair` must be a handle from this library, not yet freed.
 */
void fqc_pair_free(struct FqcPair *pair);

/**
 * Number of variables of the pair's polynomials; 0 for null.
 *
 * # Safety
 * `pair` must be a live handle from this library or null.
 */
size_t fqc_pair_arity(const struct FqcPair *pair);

/**
 * Copy the builtin's default frequencies into `out` (up to `cap` values)
 * and return how many the pair carries. Pairs loaded from JSON have
 * none and return 0. Call with `cap = 0` to query the count.
 *
 * # Safety
 * `pair` must be a live handle or null; `out` must point to at least
 * `cap` doubles when `cap > 0`.
 */
size_t fqc_pair_default_freq(const struct FqcPair *pair, double *out, size_t cap);

/**
 * Find the zeros of F(s) = P(e^{-xi_1 s}, ..., e^{-xi_n s}) for
 * Im s in [-halfwidth, halfwidth]. `xi` must hold `xi_len` positive
 * frequencies matching the pair's arity. `oversample` is the grid
 * density per period (32 is a good default). On success `*out` owns the
 * list.
 *
 * # Safety
 * `pair` must be a live handle; `xi` must point to `xi_len` doubles;
 * `out` must be valid.
 */
enum FqcStatus fqc_zeros_find(const struct FqcPair *pair,
                              const double *xi,
                              size_t xi_len,
                              double halfwidth,
                              uint32_t oversample,
                              struct FqcZeroList **out);

/**
 * Release a zero list. Null is ignored.
 *
 * # Safety
 * `list` must be a handle from this library, not yet freed.
 */
void fqc_zeros_free(struct FqcZeroList *list);

/**
 * Number of zeros in the list; 0 for null.
 *
 * # Safety
 * `list` must be a live handle or null.
 */
size_t fqc_zeros_len(const struct FqcZeroList *list);

/**
 * Position of the i-th zero (ascending); NaN out of range.
 *
 * # Safety
 * `list` must be a live handle or null.
 */
double fqc_zeros_gamma(const struct FqcZeroList *list, size_t i);

/**
 * Multiplicity of the i-th zero; 0 out of range.
 *
 * # Safety
 * `list` must be a live handle or null.
 */
uint32_t fqc_zeros_multiplicity(const struct FqcZeroList *list, size_t i);

/**
 * |F| at the i-th zero after polishing; NaN out of range.
 *
 * # Safety
 * `list` must be a live handle or null.
 */
double fqc_zeros_residual(const struct FqcZeroList *list, size_t i);

/**
 * Check the summation identity with a Gaussian test function of width
 * `sigma`, zero window halfwidth `window`, and coefficient truncation
 * `degree_max`. Fails with `FQC_STATUS_NUMERICAL` when the certified
 * tail exceeds its budget.
 *
 * # Safety
 * `pair` must be a live handle; `xi` must point to `xi_len` doubles;
 * `out` must be valid.
 */
enum FqcStatus fqc_verify_summation(const struct FqcPair *pair,
                                    const double *xi,
                                    size_t xi_len,
                                    double sigma,
                                    double window,
                                    uint32_t degree_max,
                                    struct FqcSummation *out);

/**
 * Random search for an interior zero of the pair's P over the closed
 * unit polydisk. Deterministic for a fixed (budget, seed).
 *
 * # Safety
 * `pair` must be a live handle; `out` must be valid.
 */
enum FqcStatus fqc_stability_search(const struct FqcPair *pair,
                                    uint64_t budget,
                                    uint64_t seed,
                                    struct FqcStabilityOutcome *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FQC_H */
