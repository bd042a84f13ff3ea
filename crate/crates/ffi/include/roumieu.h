#ifndef ROUMIEU_H
#define ROUMIEU_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Weight-sequence conditions understood by [`rm_weights_check`].
 */
typedef enum {
  /**
   * Logarithmic convexity; the parameter is ignored.
   */
  RM_CONDITION_M1 = 0,
  /**
   * Stability under differentiation; the parameter is the largest `H` tried.
   */
  RM_CONDITION_M2 = 1,
  /**
   * Strong non-quasianalyticity; the parameter is `A`.
   */
  RM_CONDITION_M3 = 2,
  /**
   * `M_p M_q ≤ M_{p+q}`; the parameter is ignored.
   */
  RM_CONDITION_PRODUCT_GROWTH = 3,
} RmCondition;

/**
 * Result of every fallible call.
 */
typedef enum {
  RM_STATUS_OK = 0,
  RM_STATUS_NULL_POINTER = 1,
  RM_STATUS_INVALID_ARGUMENT = 2,
  RM_STATUS_PRECONDITION = 3,
  RM_STATUS_PARSE = 4,
  RM_STATUS_EVALUATION = 5,
  /**
   * Quadrature or another numerical method failed to converge.
   */
  RM_STATUS_NUMERIC = 6,
  RM_STATUS_UTF8 = 7,
  RM_STATUS_CONFIG = 8,
  RM_STATUS_PANIC = 9,
} RmStatus;

/**
 * Finite sum of densities and derivatives of point masses.
 */
typedef struct RmDistribution RmDistribution;

/**
 * Parsed test function.
 */
typedef struct RmExpr RmExpr;

/**
 * Sequence `(r_p)` increasing to infinity.
 */
typedef struct RmRSeq RmRSeq;

/**
 * Weight sequence `(M_p)`.
 */
typedef struct RmWeights RmWeights;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Owned by the
 * library and valid until the next call on the same thread.
 */
const char *rm_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *rm_version(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` is NULL or was returned by this library and not yet freed.
 */
void rm_string_free(char *s);

/**
 * Parses an expression such as `mul(cutoff(1,2), sin(x))`.
 *
 * # Safety
 * `text` is a NUL-terminated string; `out` is writable.
 */
RmStatus rm_expr_parse(const char *text, RmExpr **out);

/**
 * # Safety
 * `e` is NULL or a live handle from [`rm_expr_parse`].
 */
void rm_expr_free(RmExpr *e);

/**
 * `f(x)`.
 *
 * # Safety
 * `e` is a live handle; `out` is writable.
 */
RmStatus rm_expr_eval(const RmExpr *e, double x, double *out);

/**
 * Writes `f^{(0)}(x), …, f^{(k)}(x)` into `out[0..=k]`; `len` must be at least `k + 1`.
 *
 * # Safety
 * `e` is a live handle; `out` points to `len` writable doubles.
 */
RmStatus rm_expr_derivatives(const RmExpr *e, double x, size_t k, double *out, size_t len);

/**
 * Canonical text of the expression; free with [`rm_string_free`].
 *
 * # Safety
 * `e` is a live handle; `out` is writable.
 */
RmStatus rm_expr_to_string(const RmExpr *e, char **out);

/**
 * `M_p = (p!)^s` for `p ≤ horizon`.
 *
 * # Safety
 * `out` is writable.
 */
RmStatus rm_weights_gevrey(double s, size_t horizon, RmWeights **out);

/**
 * # Safety
 * `w` is NULL or a live handle.
 */
void rm_weights_free(RmWeights *w);

/**
 * Checks one condition at the horizon.
 *
 * # Safety
 * `w` is a live handle; `holds` is writable.
 */
RmStatus rm_weights_check(const RmWeights *w, RmCondition condition, double param, bool *holds);

/**
 * Parses `linear:c`, `affine:c,d`, `power:e` or `list:…`.
 *
 * # Safety
 * `spec` is a NUL-terminated string; `out` is writable.
 */
RmStatus rm_rseq_from_spec(const char *spec, size_t horizon, RmRSeq **out);

/**
 * # Safety
 * `r` is NULL or a live handle.
 */
void rm_rseq_free(RmRSeq *r);

/**
 * `R_p R_q ≤ R_{p+q}` for all `p + q ≤ P`.
 *
 * # Safety
 * `r` is a live handle; `holds` is writable.
 */
RmStatus rm_rseq_superadditive(const RmRSeq *r, bool *holds);

/**
 * `‖f‖_{(r_p)}` over a grid covering the support of `f`.
 *
 * # Safety
 * All handles are live; `out` is writable.
 */
RmStatus rm_r_norm(const RmExpr *e, const RmRSeq *r, const RmWeights *w, size_t k_max, double *out);

/**
 * Parses a distribution such as `gaussian + atom(0, 1, complex(1, 2))`.
 *
 * # Safety
 * `text` is a NUL-terminated string; `out` is writable.
 */
RmStatus rm_dist_parse(const char *text, RmDistribution **out);

/**
 * # Safety
 * `t` is NULL or a live handle.
 */
void rm_dist_free(RmDistribution *t);

/**
 * `⟨T, φ⟩` as real and imaginary parts.
 *
 * # Safety
 * Handles are live; `re` and `im` are writable.
 */
RmStatus rm_dist_pair(const RmDistribution *t, const RmExpr *phi, double *re, double *im);

/**
 * Runs the five-condition harness and returns the JSON report.
 *
 * `config` is NULL for the standard settings or the text of an experiment
 * file (its distribution, if any, is ignored). Free the result with
 * [`rm_string_free`].
 *
 * # Safety
 * `t` is a live handle; `config` is NULL or NUL-terminated; `out` is writable.
 */
RmStatus rm_classify_json(const RmDistribution *t, const char *config, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ROUMIEU_H */
