#ifndef QCHAOS_H
#define QCHAOS_H

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QcStatus {
  QC_STATUS_OK = 0,
  QC_STATUS_NULL_POINTER = 1,
  QC_STATUS_INVALID_ARGUMENT = 2,
  QC_STATUS_DIMENSION_MISMATCH = 3,
  QC_STATUS_NON_UNITARY = 4,
  QC_STATUS_NUMERICAL = 5,
  QC_STATUS_PANIC = 6,
} QcStatus;

/**
 * Opaque eigen-decomposition of a unitary matrix.
 */
typedef struct QcEigenSystem QcEigenSystem;

/**
 * Opaque dense complex matrix.
 */
typedef struct QcMatrix QcMatrix;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * NUL-terminated message for the last failure on this thread, or NULL if
 * none. Valid until the next failing call on the same thread.
 */
const char *qc_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *qc_version(void);

/**
 * Exact Grover operator for `n` qubits and marked index `xi`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum QcStatus qc_matrix_grover(size_t n, size_t xi, struct QcMatrix **out);

/**
 * Exact `n`-qubit QFT.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum QcStatus qc_matrix_qft(size_t n, struct QcMatrix **out);

/**
 * Grover operator with independent rotation layers of strength `epsilon`,
 * drawn from `seed`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum QcStatus qc_matrix_perturbed_grover(size_t n,
                                         size_t xi,
                                         double epsilon,
                                         uint64_t seed,
                                         struct QcMatrix **out);

/**
 * QFT with relative phase noise of strength `epsilon`, drawn from `seed`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum QcStatus qc_matrix_perturbed_qft(size_t n,
                                      double epsilon,
                                      uint64_t seed,
                                      struct QcMatrix **out);

/**
 * Matrix from `dim * dim` row-major real and imaginary parts.
 *
 * # Safety
 * `re` and `im` must each point to `dim * dim` readable doubles; `out` must
 * be valid for one handle.
 */
enum QcStatus qc_matrix_from_parts(size_t dim,
                                   const double *re,
                                   const double *im,
                                   struct QcMatrix **out);

/**
 * Row count of `m`, or 0 when `m` is NULL.
 *
 * # Safety
 * `m` must be NULL or a live handle.
 */
size_t qc_matrix_dim(const struct QcMatrix *m);

/**
 * Copies `m` into row-major `re` / `im` buffers of `len` doubles each.
 *
 * # Safety
 * `m` must be a live handle; `re` and `im` must each be writable for `len`
 * doubles.
 */
enum QcStatus qc_matrix_copy_out(const struct QcMatrix *m, double *re, double *im, size_t len);

/**
 * `max |U^dagger U - I|` entrywise.
 *
 * # Safety
 * `m` must be a live handle and `out` writable.
 */
enum QcStatus qc_matrix_unitarity_defect(const struct QcMatrix *m, double *out);

/**
 * # Safety
 * `m` must be NULL or a handle not yet freed.
 */
void qc_matrix_free(struct QcMatrix *m);

/**
 * Eigen-decomposition of a unitary `m`. Degenerate eigenspaces get a
 * basis rotated by a Haar matrix drawn from `seed`. A nonpositive
 * `degeneracy_tolerance` selects the default `1e-8 * 2 pi / N`.
 *
 * # Safety
 * `m` must be a live handle; `out` must be valid for one handle.
 */
enum QcStatus qc_eig(const struct QcMatrix *m,
                     double degeneracy_tolerance,
                     uint64_t seed,
                     struct QcEigenSystem **out);

/**
 * Dimension of `e`, or 0 when `e` is NULL.
 *
 * # Safety
 * `e` must be NULL or a live handle.
 */
size_t qc_eig_dim(const struct QcEigenSystem *e);

/**
 * Sorted eigenphases `phi` (eigenvalue `exp(-i phi)`) into `out[0..len]`.
 *
 * # Safety
 * `e` must be a live handle and `out` writable for `len` doubles.
 */
enum QcStatus qc_eig_phases(const struct QcEigenSystem *e, double *out, size_t len);

/**
 * Component `row` of eigenvector `col`.
 *
 * # Safety
 * `e` must be a live handle; `re` and `im` writable.
 */
enum QcStatus qc_eig_vector_component(const struct QcEigenSystem *e,
                                      size_t row,
                                      size_t col,
                                      double *re,
                                      double *im);

/**
 * # Safety
 * `e` must be NULL or a handle not yet freed.
 */
void qc_eig_free(struct QcEigenSystem *e);

/**
 * Fidelities `|<U^k psi | V^k psi>|^2` for `k = 1..=k_max` into `out`,
 * which must hold `k_max` doubles. `psi` is given by `dim` real and
 * imaginary parts and must be normalized.
 *
 * # Safety
 * `u` and `v` must be live handles; `psi_re`, `psi_im` readable for `dim`
 * doubles; `out` writable for `k_max` doubles.
 */
enum QcStatus qc_overlap_series(const struct QcMatrix *u,
                                const struct QcMatrix *v,
                                const double *psi_re,
                                const double *psi_im,
                                size_t dim,
                                size_t k_max,
                                double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QCHAOS_H */
