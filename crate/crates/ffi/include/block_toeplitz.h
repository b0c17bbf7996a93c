#ifndef BLOCK_TOEPLITZ_H
#define BLOCK_TOEPLITZ_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BtzStatus {
  BTZ_STATUS_OK = 0,
  BTZ_STATUS_NULL_POINTER = 1,
  BTZ_STATUS_INVALID_UTF8 = 2,
  BTZ_STATUS_PARSE_ERROR = 3,
  BTZ_STATUS_DIMENSION_MISMATCH = 4,
  BTZ_STATUS_PRECONDITION = 5,
  BTZ_STATUS_UNKNOWN_ID = 6,
  BTZ_STATUS_INVALID_ALGEBRA = 7,
  BTZ_STATUS_PANIC = 8,
  BTZ_STATUS_INTERNAL = 9,
} BtzStatus;

/**
 * Opaque block matrix.
 */
typedef struct BtzMatrix BtzMatrix;

/**
 * Opaque Toeplitz spec.
 */
typedef struct BtzSpec BtzSpec;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *btz_version(void);

/**
 * Message for the last failed call on this thread, or NULL. Valid until the
 * next call into the library from the same thread.
 */
const char *btz_last_error_message(void);

/**
 * Release a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void btz_string_free(char *s);

/**
 * Parse a spec from JSON `{"n", "d", "diag", "lower", "upper"}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum BtzStatus btz_spec_from_json(const char *json, struct BtzSpec **out);

/**
 * # Safety
 * `spec` must come from this library and not have been freed. NULL is ignored.
 */
void btz_spec_free(struct BtzSpec *spec);

/**
 * # Safety
 * `spec` must be a live handle; `out` must be writable.
 */
enum BtzStatus btz_spec_to_json(const struct BtzSpec *spec, char **out);

/**
 * Block order and block size of a spec.
 *
 * # Safety
 * `spec` must be a live handle; `n` and `d` must be writable.
 */
enum BtzStatus btz_spec_dims(const struct BtzSpec *spec, size_t *n, size_t *d);

/**
 * Expand a spec into a new matrix handle.
 *
 * # Safety
 * `spec` must be a live handle; `out` must be writable.
 */
enum BtzStatus btz_spec_build(const struct BtzSpec *spec, struct BtzMatrix **out);

/**
 * Normality decided by the block criterion on the spec entries.
 *
 * # Safety
 * `spec` must be a live handle; `out` must be writable.
 */
enum BtzStatus btz_spec_is_normal(const struct BtzSpec *spec, bool *out);

/**
 * Full normality report (verdict, 1-based witness pair, defect matrix) as JSON.
 *
 * # Safety
 * `spec` must be a live handle; `out` must be writable.
 */
enum BtzStatus btz_spec_normality_json(const struct BtzSpec *spec, char **out);

/**
 * Parse a block matrix: nested `[row][col][i][j]` scalars, or a plain
 * scalar matrix read as block size 1.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum BtzStatus btz_matrix_from_json(const char *json, struct BtzMatrix **out);

/**
 * # Safety
 * `m` must come from this library and not have been freed. NULL is ignored.
 */
void btz_matrix_free(struct BtzMatrix *m);

/**
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum BtzStatus btz_matrix_to_json(const struct BtzMatrix *m, char **out);

/**
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum BtzStatus btz_matrix_is_toeplitz(const struct BtzMatrix *m, bool *out);

/**
 * Recover the spec of a block Toeplitz matrix. Fails with
 * `BTZ_STATUS_PRECONDITION` when the matrix is not block Toeplitz.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum BtzStatus btz_matrix_to_spec(const struct BtzMatrix *m, struct BtzSpec **out);

/**
 * Normality decided directly from M M* - M* M.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum BtzStatus btz_matrix_is_normal(const struct BtzMatrix *m, bool *out);

/**
 * Classify an instance given as JSON text, the same input `btz verify`
 * accepts. `x_json` may be NULL; otherwise it overrides the instance's X.
 * Writes the verification report as JSON.
 *
 * # Safety
 * `instance` must be a NUL-terminated string, `x_json` NULL or one, and
 * `out` writable.
 */
enum BtzStatus btz_verify_json(const char *instance, const char *x_json, char **out);

/**
 * Run one randomized suite with default shape ranges and write its summary
 * as JSON. `failed` in the summary counts disagreements with the oracle.
 *
 * # Safety
 * `theorem_id` must be a NUL-terminated string; `out` must be writable.
 */
enum BtzStatus btz_run_suite(const char *theorem_id, uint64_t seed, size_t trials, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BLOCK_TOEPLITZ_H */
