#ifndef QUDIT_PAULI_H
#define QUDIT_PAULI_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QpStatus {
  QP_STATUS_OK = 0,
  QP_STATUS_NULL_POINTER = 1,
  QP_STATUS_INVALID_ARGUMENT = 2,
  QP_STATUS_DIMENSION_MISMATCH = 3,
  QP_STATUS_ENCODING_VIOLATION = 4,
  QP_STATUS_PARSE_ERROR = 5,
  QP_STATUS_NOT_UNITARY = 6,
  QP_STATUS_BUFFER_TOO_SMALL = 7,
  QP_STATUS_RUNTIME_ERROR = 8,
  QP_STATUS_PANIC = 9,
} QpStatus;

typedef enum QpRealizationKind {
  QP_REALIZATION_KIND_SPIN_NUMBER = 0,
  QP_REALIZATION_KIND_OSC_NUMBER = 1,
  QP_REALIZATION_KIND_SPIN_PHASE = 2,
  QP_REALIZATION_KIND_OSC_PHASE = 3,
} QpRealizationKind;

typedef enum QpOperator {
  QP_OPERATOR_X = 0,
  QP_OPERATOR_Z = 1,
  QP_OPERATOR_THETA = 2,
  QP_OPERATOR_GENERATOR = 3,
} QpOperator;

/**
 * Opaque realization handle.
 */
typedef struct QpRealization QpRealization;

/**
 * Opaque register handle.
 */
typedef struct QpRegister QpRegister;

/**
 * `ω^phase X^shift Z^clock`, exponents taken mod the dimension.
 */
typedef struct QpPauli {
  uint32_t phase;
  uint32_t shift;
  uint32_t clock;
} QpPauli;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or an empty string.
 * Valid until the next `qp_` call on the same thread.
 */
const char *qp_last_error(void);

/**
 * Builds a realization of dimension `d` into `*out`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum QpStatus qp_realization_new(enum QpRealizationKind k, size_t d, struct QpRealization **out);

/**
 * # Safety
 * `r` must be null or a handle from `qp_realization_new` not yet freed.
 */
void qp_realization_free(struct QpRealization *r);

/**
 * # Safety
 * `r` must be a live realization handle and `d` writable.
 */
enum QpStatus qp_realization_dim(const struct QpRealization *r, size_t *d);

/**
 * Copies one operator into `buf` as `2·d·d` doubles.
 *
 * # Safety
 * `r` must be a live handle and `buf` must hold `len` doubles.
 */
enum QpStatus qp_realization_operator(const struct QpRealization *r,
                                      enum QpOperator op,
                                      double *buf,
                                      size_t len);

/**
 * `*out = p · q` in the group of dimension `d`.
 *
 * # Safety
 * `out` must be writable.
 */
enum QpStatus qp_pauli_multiply(size_t d, struct QpPauli p, struct QpPauli q, struct QpPauli *out);

/**
 * `*out = k` with `p q = ω^k q p`.
 *
 * # Safety
 * `out` must be writable.
 */
enum QpStatus qp_pauli_commutation_phase(size_t d,
                                         struct QpPauli p,
                                         struct QpPauli q,
                                         uint32_t *out);

/**
 * Number-encoded register in `|labels[0] … labels[n−1]⟩`.
 *
 * # Safety
 * `dims` and `labels` must each point to `n` values; `out` must be writable.
 */
enum QpStatus qp_register_new(const size_t *dims,
                              const size_t *labels,
                              size_t n,
                              struct QpRegister **out);

/**
 * # Safety
 * `r` must be null or a handle from `qp_register_new` not yet freed.
 */
void qp_register_free(struct QpRegister *r);

/**
 * Number of amplitudes in the state vector.
 *
 * # Safety
 * `r` must be a live handle and `len` writable.
 */
enum QpStatus qp_register_state_len(const struct QpRegister *r, size_t *len);

/**
 * Copies the state into `buf` as `2·state_len` doubles.
 *
 * # Safety
 * `r` must be a live handle and `buf` must hold `len` doubles.
 */
enum QpStatus qp_register_state(const struct QpRegister *r, double *buf, size_t len);

/**
 * # Safety
 * `r` must be a live handle.
 */
enum QpStatus qp_register_apply_x(struct QpRegister *r, size_t qudit, size_t power);

/**
 * # Safety
 * `r` must be a live handle.
 */
enum QpStatus qp_register_apply_z(struct QpRegister *r, size_t qudit, size_t power);

/**
 * # Safety
 * `r` must be a live handle.
 */
enum QpStatus qp_register_apply_fourier(struct QpRegister *r, size_t qudit, bool inverse);

/**
 * # Safety
 * `r` must be a live handle.
 */
enum QpStatus qp_register_swap_encoding(struct QpRegister *r, size_t qudit);

/**
 * Control must be number-encoded and the target phase-encoded.
 *
 * # Safety
 * `r` must be a live handle.
 */
enum QpStatus qp_register_apply_sum(struct QpRegister *r, size_t control, size_t target);

/**
 * Label probabilities of one qudit in its current encoding; `buf` needs `dim` doubles.
 *
 * # Safety
 * `r` must be a live handle and `buf` must hold `len` doubles.
 */
enum QpStatus qp_register_measure(const struct QpRegister *r,
                                  size_t qudit,
                                  double *buf,
                                  size_t len);

/**
 * Parses and runs `.qc` source text; `*json_out` receives the report, to be
 * released with `qp_string_free`.
 *
 * # Safety
 * `source` must be a nul-terminated string and `json_out` writable.
 */
enum QpStatus qp_circuit_run(const char *source, char **json_out);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void qp_string_free(char *s);

/**
 * Library version, static storage.
 */
const char *qp_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QUDIT_PAULI_H */
