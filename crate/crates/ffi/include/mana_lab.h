#ifndef MANA_LAB_H
#define MANA_LAB_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MlStatus {
  ML_STATUS_OK = 0,
  ML_STATUS_NULL_POINTER = 1,
  ML_STATUS_INVALID_UTF8 = 2,
  ML_STATUS_INVALID_DIMENSION = 3,
  ML_STATUS_INVALID_STATE = 4,
  ML_STATUS_INVALID_ARGUMENT = 5,
  ML_STATUS_BUFFER_TOO_SMALL = 6,
  ML_STATUS_PANIC = 7,
} MlStatus;

/**
 * Opaque state handle.
 */
typedef struct MlState MlState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Named pure state (`strange`, `norrell`, `t`, `h`, `phi_lambda`,
 * `psi_theta`, `max_coherent`, `basis`). `params` may be null when
 * `n_params` is 0.
 *
 * # Safety
 * `name` must be a nul-terminated string, `params` must point to
 * `n_params` doubles and `out` must be writable.
 */
enum MlStatus ml_state_named(const char *name,
                             const double *params,
                             size_t n_params,
                             struct MlState **out);

/**
 * `p|ψ⟩⟨ψ| + (1−p)·1/d` for a named pure state.
 *
 * # Safety
 * As for [`ml_state_named`].
 */
enum MlStatus ml_state_noisy(const char *name,
                             const double *params,
                             size_t n_params,
                             double p,
                             struct MlState **out);

/**
 * State from the JSON interchange document
 * `{"dims": [...], "kind": "pure"|"mixed", "data": ...}`.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` must be writable.
 */
enum MlStatus ml_state_from_json(const char *json, struct MlState **out);

/**
 * New handle holding `CSUM (ρ ⊗ |0⟩⟨0|) CSUM†` for a single-qudit `state`.
 *
 * # Safety
 * `state` must be a live handle and `out` must be writable.
 */
enum MlStatus ml_state_csum(const struct MlState *state, struct MlState **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `state` must be null or a handle not yet freed.
 */
void ml_state_free(struct MlState *state);

/**
 * Number of subsystems and total Hilbert-space dimension.
 *
 * # Safety
 * `state` must be a live handle; the outputs must be writable.
 */
enum MlStatus ml_state_shape(const struct MlState *state, size_t *subsystems, size_t *total_dim);

/**
 * # Safety
 * `state` must be a live handle and `out` must be writable.
 */
enum MlStatus ml_mana(const struct MlState *state, double *out);

/**
 * `Mana(ρ_ab) − Mana(ρ_a) − Mana(ρ_b)` of a two-qudit state.
 *
 * # Safety
 * `state` must be a live handle and `out` must be writable.
 */
enum MlStatus ml_mutual_mana(const struct MlState *state, double *out);

/**
 * Stabilizer Rényi entropy of order `alpha` (`alpha != 1`).
 *
 * # Safety
 * `state` must be a live handle and `out` must be writable.
 */
enum MlStatus ml_sre(const struct MlState *state, double alpha, double *out);

/**
 * `Σ |tr(ρ D)|` over the Weyl operators (not logged).
 *
 * # Safety
 * `state` must be a live handle and `out` must be writable.
 */
enum MlStatus ml_l1_magic(const struct MlState *state, double *out);

/**
 * # Safety
 * `state` must be a live handle and `out` must be writable.
 */
enum MlStatus ml_mutual_information(const struct MlState *state, double *out);

/**
 * Copies the Wigner function into `buf` in row-major `(k₁, l₁, k₂, l₂, …)`
 * order. `written` always receives the required length; when `len` is too
 * small nothing is copied and `ML_STATUS_BUFFER_TOO_SMALL` is returned.
 *
 * # Safety
 * `state` must be a live handle, `buf` must hold `len` doubles (or be null
 * when `len` is 0) and `written` must be writable.
 */
enum MlStatus ml_wigner(const struct MlState *state, double *buf, size_t len, size_t *written);

/**
 * Message for the last failed call on this thread, or null. Valid until
 * the next call into this library from the same thread.
 */
const char *ml_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *ml_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MANA_LAB_H */
