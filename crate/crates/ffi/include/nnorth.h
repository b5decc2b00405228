#ifndef NNORTH_H
#define NNORTH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum NnorthStatus {
  NNORTH_STATUS_OK = 0,
  NNORTH_STATUS_NULL_POINTER = 1,
  NNORTH_STATUS_DIMENSION = 2,
  NNORTH_STATUS_PARAMETER = 3,
  NNORTH_STATUS_NOT_ORTHONORMAL = 4,
  NNORTH_STATUS_RETRACTION = 5,
  NNORTH_STATUS_LINE_SEARCH = 6,
  NNORTH_STATUS_ROUNDING = 7,
  NNORTH_STATUS_PRECONDITION = 8,
  NNORTH_STATUS_ORACLE_SIZE = 9,
  NNORTH_STATUS_PARSE = 10,
  NNORTH_STATUS_UNDEFINED_GAP = 11,
  NNORTH_STATUS_INPUT = 12,
  NNORTH_STATUS_IO = 13,
  NNORTH_STATUS_UTF8 = 14,
  NNORTH_STATUS_PANIC = 15,
} NnorthStatus;

typedef enum NnorthSolver {
  NNORTH_SOLVER_SEPPG_PLUS = 0,
  NNORTH_SOLVER_SEPPG_ZERO = 1,
  NNORTH_SOLVER_ALM = 2,
} NnorthSolver;

/**
 * How a solve ended.
 */
typedef enum NnorthSolveStatus {
  NNORTH_SOLVE_STATUS_FEASIBLE = 0,
  NNORTH_SOLVE_STATUS_STAGNATED = 1,
  NNORTH_SOLVE_STATUS_MAX_OUTER = 2,
  NNORTH_SOLVE_STATUS_INNER_FAILURE = 3,
} NnorthSolveStatus;

/**
 * Dense real matrix.
 */
typedef struct NnorthMatrix NnorthMatrix;

/**
 * Quadratic assignment instance.
 */
typedef struct NnorthQap NnorthQap;

/**
 * Result of a solver run.
 */
typedef struct NnorthReport NnorthReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty if none. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *nnorth_last_error_message(void);

/**
 * Copies `rows*cols` row-major values into a new matrix.
 *
 * # Safety
 * `data` must point to `rows*cols` readable doubles; `out` must be writable.
 */
enum NnorthStatus nnorth_matrix_new(size_t rows,
                                    size_t cols,
                                    const double *data,
                                    struct NnorthMatrix **out);

/**
 * Reads a whitespace-separated dense matrix file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum NnorthStatus nnorth_matrix_read(const char *path, struct NnorthMatrix **out);

/**
 * # Safety
 * `m` must be null or a handle from this library that has not been freed.
 */
void nnorth_matrix_free(struct NnorthMatrix *m);

/**
 * Number of rows, 0 for a null handle.
 *
 * # Safety
 * `m` must be null or a live handle.
 */
size_t nnorth_matrix_rows(const struct NnorthMatrix *m);

/**
 * Number of columns, 0 for a null handle.
 *
 * # Safety
 * `m` must be null or a live handle.
 */
size_t nnorth_matrix_cols(const struct NnorthMatrix *m);

/**
 * Writes the entries row-major into `buf`, which must hold `len` doubles
 * with `len == rows*cols`.
 *
 * # Safety
 * `m` must be a live handle and `buf` must point to `len` writable doubles.
 */
enum NnorthStatus nnorth_matrix_copy_to(const struct NnorthMatrix *m, double *buf, size_t len);

/**
 * Random `n×r` matrix with orthonormal columns, reproducible from `seed`.
 *
 * # Safety
 * `out` must be writable.
 */
enum NnorthStatus nnorth_random_stiefel_start(size_t n,
                                              size_t r,
                                              uint64_t seed,
                                              struct NnorthMatrix **out);

/**
 * `Σ max(0, −xᵢⱼ)`.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum NnorthStatus nnorth_vartheta(const struct NnorthMatrix *m, double *out);

/**
 * Frobenius distance to the nearest matrix with orthonormal columns.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum NnorthStatus nnorth_dist_to_stiefel(const struct NnorthMatrix *m, double *out);

/**
 * Rounds onto the nonnegative matrices with orthonormal columns.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum NnorthStatus nnorth_round_to_feasible(const struct NnorthMatrix *m, struct NnorthMatrix **out);

/**
 * Parses a QAPLIB `.dat` file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum NnorthStatus nnorth_qap_parse_file(const char *path, struct NnorthQap **out);

/**
 * Parses QAPLIB text held in memory.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum NnorthStatus nnorth_qap_parse_str(const char *text, struct NnorthQap **out);

/**
 * # Safety
 * `q` must be null or a live handle.
 */
void nnorth_qap_free(struct NnorthQap *q);

/**
 * Instance size `n`, 0 for a null handle.
 *
 * # Safety
 * `q` must be null or a live handle.
 */
size_t nnorth_qap_size(const struct NnorthQap *q);

/**
 * Cost of the assignment `i → perm[i]` (0-based).
 *
 * # Safety
 * `q` must be a live handle, `perm` must point to `n` readable values, and
 * `out` must be writable.
 */
enum NnorthStatus nnorth_qap_permutation_cost(const struct NnorthQap *q,
                                              const size_t *perm,
                                              size_t n,
                                              double *out);

/**
 * Solves the lifted QAP from `x0`. `config` is optional `key = value` text.
 *
 * # Safety
 * `q` and `x0` must be live handles, `config` null or NUL-terminated, and
 * `out` writable.
 */
enum NnorthStatus nnorth_solve_qap(const struct NnorthQap *q,
                                   enum NnorthSolver solver,
                                   const struct NnorthMatrix *x0,
                                   const char *config,
                                   struct NnorthReport **out);

/**
 * Projects `c` onto the feasible set starting from `x0`, with `ρ₀ = 1/‖c‖₂`
 * unless `config` sets it.
 *
 * # Safety
 * `c` and `x0` must be live handles, `config` null or NUL-terminated, and
 * `out` writable.
 */
enum NnorthStatus nnorth_solve_projection(const struct NnorthMatrix *c,
                                          enum NnorthSolver solver,
                                          const struct NnorthMatrix *x0,
                                          const char *config,
                                          struct NnorthReport **out);

/**
 * # Safety
 * `r` must be null or a live handle.
 */
void nnorth_report_free(struct NnorthReport *r);

/**
 * Objective at the final iterate; NaN for a null handle.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
double nnorth_report_f_final(const struct NnorthReport *report);

/**
 * Nonnegativity violation `Σ max(0, −xᵢⱼ)` of the final iterate; NaN for a null handle.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
double nnorth_report_ninf(const struct NnorthReport *report);

/**
 * `‖XᵀX − I‖_F` of the final iterate; NaN for a null handle.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
double nnorth_report_orth_residual(const struct NnorthReport *report);

/**
 * Inner gradient norm at exit; NaN for a null handle.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
double nnorth_report_stationarity(const struct NnorthReport *report);

/**
 * Outer iterations; 0 for a null handle.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
size_t nnorth_report_outer_iters(const struct NnorthReport *report);

/**
 * Inner iterations summed over all outer iterations; 0 for a null handle.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
size_t nnorth_report_inner_iters(const struct NnorthReport *report);

/**
 * Termination reason; `InnerFailure` for a null handle.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
enum NnorthSolveStatus nnorth_report_status(const struct NnorthReport *report);

/**
 * Final iterate as a new matrix.
 *
 * # Safety
 * `report` must be a live handle; `out` must be writable.
 */
enum NnorthStatus nnorth_report_x_final(const struct NnorthReport *report,
                                        struct NnorthMatrix **out);

/**
 * Rounded feasible counterpart of the final iterate as a new matrix.
 *
 * # Safety
 * `report` must be a live handle; `out` must be writable.
 */
enum NnorthStatus nnorth_report_x_rounded(const struct NnorthReport *report,
                                          struct NnorthMatrix **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NNORTH_H */
