/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef BOHR_H
#define BOHR_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result code of every fallible call.
 */
typedef enum BohrStatus {
  BOHR_STATUS_OK = 0,
  BOHR_STATUS_NULL_POINTER = 1,
  BOHR_STATUS_INVALID_ARGUMENT = 2,
  BOHR_STATUS_DIMENSION_MISMATCH = 3,
  BOHR_STATUS_NOT_HERMITIAN = 4,
  BOHR_STATUS_NO_CONVERGENCE = 5,
  BOHR_STATUS_PARSE = 6,
  BOHR_STATUS_NOT_COMPLETELY_POSITIVE = 7,
  BOHR_STATUS_IO = 8,
  /*
   A Rust panic was caught at the boundary.
   */
  BOHR_STATUS_INTERNAL = 99,
} BohrStatus;

typedef enum BohrVerdict {
  BOHR_VERDICT_HOLDS = 0,
  BOHR_VERDICT_VIOLATED = 1,
  BOHR_VERDICT_NOT_APPLICABLE = 2,
} BohrVerdict;

/*
 Opaque complex matrix.
 */
typedef struct BohrMatrix BohrMatrix;

/*
 Opaque check report.
 */
typedef struct BohrReport BohrReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread, or NULL. Valid until the
 next call into the library on the same thread.
 */
const char *bohr_last_error_message(void);

/*
 Library version as a static NUL-terminated string.
 */
const char *bohr_version(void);

/*
 Creates a `rows × cols` matrix from row-major real and imaginary parts.
 `im` may be NULL for a real matrix.

 # Safety
 `re` (and `im` when not NULL) must point to `rows * cols` doubles and
 `out` must be a valid pointer.
 */
enum BohrStatus bohr_matrix_new(size_t rows,
                                size_t cols,
                                const double *re,
                                const double *im,
                                struct BohrMatrix **out);

/*
 # Safety
 `m` must be NULL or a handle from [`bohr_matrix_new`] not yet freed.
 */
void bohr_matrix_free(struct BohrMatrix *m);

/*
 # Safety
 `m` must be a live handle; `rows` and `cols` valid pointers.
 */
enum BohrStatus bohr_matrix_shape(const struct BohrMatrix *m, size_t *rows, size_t *cols);

/*
 Descending eigenvalues of a Hermitian matrix, written to `out[0..n]`.

 # Safety
 `m` must be a live handle and `out` must have room for `len` doubles.
 */
enum BohrStatus bohr_eigenvalues(const struct BohrMatrix *m, double *out, size_t len);

/*
 Sum of the `k` largest singular values.

 # Safety
 `m` must be a live handle and `out` a valid pointer.
 */
enum BohrStatus bohr_ky_fan_norm(const struct BohrMatrix *m, size_t k, double *out);

/*
 `(Σ s_j^p)^{1/p}`.

 # Safety
 `m` must be a live handle and `out` a valid pointer.
 */
enum BohrStatus bohr_schatten_norm(const struct BohrMatrix *m, double p, double *out);

/*
 Checks an instance given as JSON text (the format read by `bohr check`).
 A negative `tol` selects the default tolerance (or `BOHR_TOL`).

 # Safety
 `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum BohrStatus bohr_check_json(const char *json, double tol, struct BohrReport **out);

/*
 # Safety
 `r` must be NULL or a handle from [`bohr_check_json`] not yet freed.
 */
void bohr_report_free(struct BohrReport *r);

/*
 # Safety
 `r` must be a live handle and `out` a valid pointer.
 */
enum BohrStatus bohr_report_verdict(const struct BohrReport *r, enum BohrVerdict *out);

/*
 Smallest slack; NaN when the instance was not applicable.

 # Safety
 `r` must be a live handle and `out` a valid pointer.
 */
enum BohrStatus bohr_report_min_slack(const struct BohrReport *r, double *out);

/*
 Number of compared values per side.

 # Safety
 `r` must be a live handle and `out` a valid pointer.
 */
enum BohrStatus bohr_report_len(const struct BohrReport *r, size_t *out);

/*
 Copies both sides into `lhs[0..len]` and `rhs[0..len]`.

 # Safety
 `r` must be a live handle; `lhs` and `rhs` must have room for `len`
 doubles, where `len` is at least [`bohr_report_len`].
 */
enum BohrStatus bohr_report_sides(const struct BohrReport *r, double *lhs, double *rhs, size_t len);

/*
 The full report as JSON; release with [`bohr_string_free`].

 # Safety
 `r` must be a live handle and `out` a valid pointer.
 */
enum BohrStatus bohr_report_to_json(const struct BohrReport *r, char **out);

/*
 # Safety
 `s` must be NULL or a string returned by this library, not yet freed.
 */
void bohr_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BOHR_H */
