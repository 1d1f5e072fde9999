#ifndef TRIBLOCH_H
#define TRIBLOCH_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TriblochFieldKind {
  TRIBLOCH_FIELD_KIND_RESONANT = 0,
  TRIBLOCH_FIELD_KIND_NON_RESONANT = 1,
  TRIBLOCH_FIELD_KIND_CONSTANT_Z = 2,
} TriblochFieldKind;

typedef enum TriblochMethod {
  TRIBLOCH_METHOD_RK4 = 0,
  TRIBLOCH_METHOD_RK45 = 1,
} TriblochMethod;

typedef enum TriblochStatus {
  TRIBLOCH_STATUS_OK = 0,
  TRIBLOCH_STATUS_NULL_POINTER = 1,
  TRIBLOCH_STATUS_INVALID_ARGUMENT = 2,
  TRIBLOCH_STATUS_DOMAIN = 3,
  TRIBLOCH_STATUS_VALIDATION = 4,
  TRIBLOCH_STATUS_PHYSICALITY = 5,
  TRIBLOCH_STATUS_ACCURACY = 6,
  TRIBLOCH_STATUS_ORACLE_MISMATCH = 7,
  TRIBLOCH_STATUS_PARSE = 8,
  TRIBLOCH_STATUS_IO = 9,
  TRIBLOCH_STATUS_PANIC = 10,
} TriblochStatus;

/**
 * Opaque three-qubit state (64 real coefficients).
 */
typedef struct TriblochState TriblochState;

/**
 * Opaque sampled trajectory.
 */
typedef struct TriblochTrajectory TriblochTrajectory;

typedef struct TriblochFieldSpec {
  enum TriblochFieldKind kind;
  double omega0;
  double omega1;
  /**
   * Field multipliers for qubits e, p, n.
   */
  double multipliers[3];
} TriblochFieldSpec;

typedef struct TriblochCouplings {
  double j_ep;
  double j_en;
  double j_pn;
} TriblochCouplings;

typedef struct TriblochIntegratorConfig {
  double tau_max;
  double dt;
  size_t sample_every;
  enum TriblochMethod method;
  /**
   * Local error tolerance of the adaptive method.
   */
  double tolerance;
  double drift_tolerance;
} TriblochIntegratorConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `len`). Returns the full message length in bytes.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t tribloch_last_error_message(char *buf, size_t len);

/**
 * Library version as a static NUL-terminated string.
 */
const char *tribloch_version(void);

struct TriblochFieldSpec tribloch_field_spec_default(enum TriblochFieldKind kind);

struct TriblochCouplings tribloch_couplings_reference(void);

struct TriblochIntegratorConfig tribloch_integrator_config_default(void);

/**
 * Creates a named initial state (`S`, `BS`, `GHZ`, `W`, `V`, `Mix`,
 * `Polarized`). `x` is used only for `Mix`.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be writable.
 */
enum TriblochStatus tribloch_state_initial(const char *name, double x, struct TriblochState **out);

/**
 * Creates a state from 64 coefficients ordered `16·α + 4·β + γ`.
 *
 * # Safety
 * `coeffs` must point to `len` readable doubles; `out` must be writable.
 */
enum TriblochStatus tribloch_state_from_coeffs(const double *coeffs,
                                               size_t len,
                                               struct TriblochState **out);

/**
 * # Safety
 * `state` must be null or a handle from this library not yet freed.
 */
void tribloch_state_free(struct TriblochState *state);

/**
 * # Safety
 * `state` must be a live handle; `out` must be writable.
 */
enum TriblochStatus tribloch_state_get(const struct TriblochState *state,
                                       size_t alpha,
                                       size_t beta,
                                       size_t gamma,
                                       double *out);

/**
 * Sets one coefficient. `R000` is fixed at 1 and cannot be changed.
 *
 * # Safety
 * `state` must be a live handle.
 */
enum TriblochStatus tribloch_state_set(struct TriblochState *state,
                                       size_t alpha,
                                       size_t beta,
                                       size_t gamma,
                                       double value);

/**
 * Copies all 64 coefficients into `out`.
 *
 * # Safety
 * `state` must be a live handle; `out` must point to 64 writable doubles.
 */
enum TriblochStatus tribloch_state_coeffs(const struct TriblochState *state, double *out);

/**
 * Evaluates a named measure (`m_sm`, `c3`, `c3_formal`, `m_b`, `m_k`,
 * `m_l`, `b`, `p_flip`, `p_flip_e`, `rho11`, `rho88`).
 *
 * # Safety
 * `state` must be a live handle, `channel` a NUL-terminated string and
 * `out` writable.
 */
enum TriblochStatus tribloch_state_measure(const struct TriblochState *state,
                                           const char *channel,
                                           double *out);

/**
 * Integrates the coefficient equations from `state`.
 *
 * # Safety
 * All pointers must be valid; `out` receives a new trajectory handle.
 */
enum TriblochStatus tribloch_integrate(const struct TriblochState *state,
                                       const struct TriblochFieldSpec *field,
                                       const struct TriblochCouplings *couplings,
                                       const struct TriblochIntegratorConfig *config,
                                       struct TriblochTrajectory **out);

/**
 * # Safety
 * `traj` must be null or a handle from this library not yet freed.
 */
void tribloch_trajectory_free(struct TriblochTrajectory *traj);

/**
 * Number of samples, or 0 for a null handle.
 *
 * # Safety
 * `traj` must be null or a live handle.
 */
size_t tribloch_trajectory_len(const struct TriblochTrajectory *traj);

/**
 * # Safety
 * `traj` must be a live handle; `out` must be writable.
 */
enum TriblochStatus tribloch_trajectory_tau(const struct TriblochTrajectory *traj,
                                            size_t i,
                                            double *out);

/**
 * Copies sample `i` into a new state handle.
 *
 * # Safety
 * `traj` must be a live handle; `out` must be writable.
 */
enum TriblochStatus tribloch_trajectory_state(const struct TriblochTrajectory *traj,
                                              size_t i,
                                              struct TriblochState **out);

/**
 * Evaluates a named measure on every sample, writing `len` values.
 *
 * # Safety
 * `traj` must be a live handle, `channel` a NUL-terminated string and `out`
 * must point to `len` writable doubles.
 */
enum TriblochStatus tribloch_trajectory_measure(const struct TriblochTrajectory *traj,
                                                const char *channel,
                                                double *out,
                                                size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TRIBLOCH_H */
