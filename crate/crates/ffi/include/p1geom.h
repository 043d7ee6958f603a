#ifndef P1GEOM_H
#define P1GEOM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Values accepted for `format` arguments.
 */
typedef enum P1Format {
  P1_FORMAT_VECTOR = 0,
  P1_FORMAT_INCIDENCE = 1,
} P1Format;

/**
 * Status codes returned by every fallible function.
 */
typedef enum P1Status {
  P1_STATUS_OK = 0,
  P1_STATUS_NULL_POINTER = 1,
  P1_STATUS_INVALID_ARGUMENT = 2,
  P1_STATUS_PARSE = 3,
  P1_STATUS_DIMENSION = 4,
  P1_STATUS_NOT_IN_CONE = 5,
  P1_STATUS_SIZE_CAP = 6,
  P1_STATUS_BUFFER_TOO_SMALL = 7,
  P1_STATUS_INTERNAL = 8,
} P1Status;

/**
 * Values accepted for `variant` arguments.
 */
typedef enum P1Variant {
  P1_VARIANT_ZERO = 0,
  P1_VARIANT_CONSTANT = 1,
  P1_VARIANT_EDGE = 2,
} P1Variant;

/**
 * Opaque design matrix.
 */
typedef struct P1Design P1Design;

/**
 * Opaque fit result.
 */
typedef struct P1Fit P1Fit;

/**
 * Opaque network.
 */
typedef struct P1Network P1Network;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Owned by the
 * library; valid until the next failing call on the same thread.
 */
const char *p1_last_error(void);

/**
 * Builds the design matrix for `n` nodes. `variant_code` is a [`P1Variant`].
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for a handle.
 */
enum P1Status p1_design_new(size_t n,
                            int32_t variant_code,
                            bool include_theta,
                            struct P1Design **out);

/**
 * # Safety
 * `design` must be NULL or a handle from [`p1_design_new`] not yet freed.
 */
void p1_design_free(struct P1Design *design);

/**
 * Number of rows, or 0 for NULL.
 *
 * # Safety
 * `design` must be NULL or a live handle.
 */
size_t p1_design_rows(const struct P1Design *design);

/**
 * Number of columns, or 0 for NULL.
 *
 * # Safety
 * `design` must be NULL or a live handle.
 */
size_t p1_design_cols(const struct P1Design *design);

/**
 * Copies the entries, row-major, into `buf` of length `len >= rows * cols`.
 *
 * # Safety
 * `design` must be a live handle and `buf` valid for `len` writes.
 */
enum P1Status p1_design_entries(const struct P1Design *design, int64_t *buf, size_t len);

/**
 * Parses a NUL-terminated network description. `format` is a [`P1Format`].
 *
 * # Safety
 * `text` must be a valid C string and `out` valid for one write.
 */
enum P1Status p1_network_parse(const char *text, int32_t format, struct P1Network **out);

/**
 * # Safety
 * `network` must be NULL or a handle from [`p1_network_parse`] not yet freed.
 */
void p1_network_free(struct P1Network *network);

/**
 * Number of nodes, or 0 for NULL.
 *
 * # Safety
 * `network` must be NULL or a live handle.
 */
size_t p1_network_nodes(const struct P1Network *network);

/**
 * Writes the sufficient statistic `A x` into `buf` (length >= rows).
 *
 * # Safety
 * Handles must be live and `buf` valid for `len` writes.
 */
enum P1Status p1_statistic(const struct P1Design *design,
                           const struct P1Network *network,
                           int64_t *buf,
                           size_t len);

/**
 * Decides whether the MLE exists for `network`.
 *
 * # Safety
 * Handles must be live and `exists` valid for one write.
 */
enum P1Status p1_check_exists(const struct P1Design *design,
                              const struct P1Network *network,
                              bool *exists);

/**
 * Fits the MLE or extended MLE. A fit that does not converge is still
 * returned; inspect [`p1_fit_converged`].
 *
 * # Safety
 * Handles must be live and `out` valid for one write.
 */
enum P1Status p1_fit(const struct P1Design *design,
                     const struct P1Network *network,
                     double tol,
                     size_t max_iter,
                     struct P1Fit **out);

/**
 * # Safety
 * `fit` must be NULL or a handle from [`p1_fit`] not yet freed.
 */
void p1_fit_free(struct P1Fit *fit);

/**
 * Number of probabilities (columns), or 0 for NULL.
 *
 * # Safety
 * `fit` must be NULL or a live handle.
 */
size_t p1_fit_len(const struct P1Fit *fit);

/**
 * Copies the fitted probabilities into `buf`.
 *
 * # Safety
 * `fit` must be live and `buf` valid for `len` writes.
 */
enum P1Status p1_fit_probabilities(const struct P1Fit *fit, double *buf, size_t len);

/**
 * Copies the zero-based facial-set indices into `buf` and stores their
 * count in `written`.
 *
 * # Safety
 * `fit` must be live, `buf` valid for `len` writes, `written` for one.
 */
enum P1Status p1_fit_facial_set(const struct P1Fit *fit, size_t *buf, size_t len, size_t *written);

/**
 * # Safety
 * `fit` must be NULL or a live handle.
 */
bool p1_fit_converged(const struct P1Fit *fit);

/**
 * Whether the ordinary MLE exists (facial set is every column).
 *
 * # Safety
 * `fit` must be NULL or a live handle.
 */
bool p1_fit_exists(const struct P1Fit *fit);

/**
 * `max |A p - t|`, or NaN for NULL.
 *
 * # Safety
 * `fit` must be NULL or a live handle.
 */
double p1_fit_residual(const struct P1Fit *fit);

/**
 * Log-likelihood of the observed network, or NaN for NULL.
 *
 * # Safety
 * `fit` must be NULL or a live handle.
 */
double p1_fit_log_likelihood(const struct P1Fit *fit);

/**
 * # Safety
 * `fit` must be NULL or a live handle.
 */
size_t p1_fit_iterations(const struct P1Fit *fit);

/**
 * JSON report of the fit. Release with [`p1_string_free`]. NULL on error.
 *
 * # Safety
 * `fit` must be NULL or a live handle.
 */
char *p1_fit_to_json(const struct P1Fit *fit);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void p1_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* P1GEOM_H */
