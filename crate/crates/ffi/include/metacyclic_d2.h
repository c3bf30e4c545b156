#ifndef METACYCLIC_D2_H
#define METACYCLIC_D2_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
enum D2Status
#ifdef __cplusplus
  : int32_t
#endif // __cplusplus
 {
  D2_STATUS_OK = 0,
  /**
   * The linear system has no integer solution.
   */
  D2_STATUS_NO_SOLUTION = 1,
  D2_STATUS_NULL_POINTER = -1,
  D2_STATUS_INVALID_UTF8 = -2,
  D2_STATUS_PARSE = -3,
  D2_STATUS_DIMENSION = -4,
  D2_STATUS_INVALID_ARGUMENT = -5,
  D2_STATUS_IO = -6,
  D2_STATUS_PANIC = -7,
};
#ifndef __cplusplus
typedef int32_t D2Status;
#endif // __cplusplus

/**
 * Opaque integer matrix.
 */
typedef struct D2Matrix D2Matrix;

/**
 * Opaque verification report.
 */
typedef struct D2Report D2Report;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last error on this thread, or NULL. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *d2_last_error_message(void);

/**
 * Parses a matrix in the text format (`rows cols` header, then rows).
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a writable pointer.
 */
D2Status d2_matrix_parse(const char *text, struct D2Matrix **out);

/**
 * # Safety
 * `m` must be NULL or a handle from this library that was not yet freed.
 */
void d2_matrix_free(struct D2Matrix *m);

/**
 * # Safety
 * `m` must be a live handle.
 */
uintptr_t d2_matrix_rows(const struct D2Matrix *m);

/**
 * # Safety
 * `m` must be a live handle.
 */
uintptr_t d2_matrix_cols(const struct D2Matrix *m);

/**
 * Text form of the matrix; free with [`d2_string_free`]. NULL on error.
 *
 * # Safety
 * `m` must be a live handle.
 */
char *d2_matrix_to_string(const struct D2Matrix *m);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library.
 */
void d2_string_free(char *s);

/**
 * Row Hermite normal form `H = U·A`. `u_out` may be NULL.
 *
 * # Safety
 * `a` must be a live handle, `h_out` writable, `u_out` NULL or writable.
 */
D2Status d2_matrix_hnf(const struct D2Matrix *a, struct D2Matrix **h_out, struct D2Matrix **u_out);

/**
 * Smith normal form `D = U·A·V`; only `D` is returned.
 *
 * # Safety
 * `a` must be a live handle and `d_out` writable.
 */
D2Status d2_matrix_snf(const struct D2Matrix *a, struct D2Matrix **d_out);

/**
 * Saturated basis (as rows) of `{v : v·A = 0}`.
 *
 * # Safety
 * `a` must be a live handle and `out` writable.
 */
D2Status d2_matrix_kernel(const struct D2Matrix *a, struct D2Matrix **out);

/**
 * Integer solution of `A·X = B`. Returns [`D2Status::NoSolution`] (and leaves
 * `x_out` untouched) when none exists; the divisibility witness is then
 * available from [`d2_last_error_message`].
 *
 * # Safety
 * `a`, `b` must be live handles and `x_out` writable.
 */
D2Status d2_matrix_solve_right(const struct D2Matrix *a,
                               const struct D2Matrix *b,
                               struct D2Matrix **x_out);

/**
 * Runs the `M(7)` chain. `fixtures_dir` may be NULL for the built-in
 * matrices. A report is produced whether or not its checks pass.
 *
 * # Safety
 * `fixtures_dir` must be NULL or a NUL-terminated path and `out` writable.
 */
D2Status d2_verify_m7(bool eq7_only, const char *fixtures_dir, struct D2Report **out);

/**
 * JSON form of the report; free with [`d2_string_free`].
 *
 * # Safety
 * `r` must be a live report handle.
 */
char *d2_report_json(const struct D2Report *r);

/**
 * 1 when no check failed, 0 when one did, -1 for a NULL handle.
 *
 * # Safety
 * `r` must be NULL or a live report handle.
 */
int32_t d2_report_passed(const struct D2Report *r);

/**
 * Number of failing checks, or 0 for a NULL handle.
 *
 * # Safety
 * `r` must be NULL or a live report handle.
 */
uintptr_t d2_report_fail_count(const struct D2Report *r);

/**
 * # Safety
 * `r` must be NULL or a report handle that was not yet freed.
 */
void d2_report_free(struct D2Report *r);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* METACYCLIC_D2_H */
