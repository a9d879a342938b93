#ifndef WALKLAB_H
#define WALKLAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define WALK_SHIFT_MS 0

#define WALK_SHIFT_FF 1

#define WALK_INIT_DELTA 0

#define WALK_INIT_UNIFORM 1

#define WALK_INIT_DIAGONAL 2

#define WALK_ENGINE_POSITION 0

#define WALK_ENGINE_MOMENTUM 1

/**
 * Result of every fallible call.
 */
typedef enum WalkStatus {
  WALK_STATUS_OK = 0,
  WALK_STATUS_NULL_POINTER = 1,
  WALK_STATUS_INVALID_ARGUMENT = 2,
  WALK_STATUS_NOT_UNITARY = 3,
  WALK_STATUS_NOT_NORMALIZED = 4,
  WALK_STATUS_PARSE = 5,
  WALK_STATUS_NUMERICAL = 6,
  WALK_STATUS_PANIC = 7,
} WalkStatus;

/**
 * Opaque coin handle.
 */
typedef struct WalkCoin WalkCoin;

/**
 * Opaque position- or momentum-space state on the N×N torus.
 */
typedef struct WalkState WalkState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success. The pointer
 * stays valid until the next call on the same thread.
 */
const char *walk_last_error(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not have been freed, or be null.
 */
void walk_string_free(char *s);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum WalkStatus walk_coin_fourier(uint32_t shift, struct WalkCoin **out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum WalkStatus walk_coin_grover(uint32_t shift, struct WalkCoin **out);

/**
 * Parses `{"shift":"ms"|"ff","matrix":[[[re,im],..],..]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` valid for writes.
 */
enum WalkStatus walk_coin_from_json(const char *json, struct WalkCoin **out);

/**
 * Writes the 4×4 coin row-major as 32 doubles (re, im pairs).
 *
 * # Safety
 * `coin` must be a live handle and `out` valid for 32 doubles.
 */
enum WalkStatus walk_coin_matrix(const struct WalkCoin *coin, double *out);

/**
 * # Safety
 * `coin` must come from this library and not have been freed, or be null.
 */
void walk_coin_free(struct WalkCoin *coin);

/**
 * Builds a normalised initial state from `alpha` (8 doubles: re1, im1, …, re4, im4).
 *
 * # Safety
 * `alpha` must point to 8 doubles and `out` be valid for writes.
 */
enum WalkStatus walk_state_initial(uint32_t kind,
                                   const double *alpha,
                                   size_t n_side,
                                   struct WalkState **out);

/**
 * # Safety
 * `json` must be a NUL-terminated string and `out` valid for writes.
 */
enum WalkStatus walk_state_from_json(const char *json, struct WalkState **out);

/**
 * Serialises to JSON; release the result with [`walk_string_free`].
 *
 * # Safety
 * `state` must be a live handle and `out` valid for writes.
 */
enum WalkStatus walk_state_to_json(const struct WalkState *state, char **out);

/**
 * Serialises to CSV; release the result with [`walk_string_free`].
 *
 * # Safety
 * `state` must be a live handle and `out` valid for writes.
 */
enum WalkStatus walk_state_to_csv(const struct WalkState *state, char **out);

/**
 * # Safety
 * `state` must come from this library and not have been freed, or be null.
 */
void walk_state_free(struct WalkState *state);

/**
 * Lattice side N, or 0 for a null handle.
 *
 * # Safety
 * `state` must be a live handle or null.
 */
size_t walk_state_size(const struct WalkState *state);

/**
 * Writes Ψ(x1, x2) as 8 doubles.
 *
 * # Safety
 * `state` must be a live handle and `out` valid for 8 doubles.
 */
enum WalkStatus walk_state_amplitude(const struct WalkState *state,
                                     size_t x1,
                                     size_t x2,
                                     double *out);

/**
 * Writes the N² site probabilities row-major; `len` must equal N².
 *
 * # Safety
 * `state` must be a live handle and `out` valid for `len` doubles.
 */
enum WalkStatus walk_state_measure(const struct WalkState *state, double *out, size_t len);

/**
 * Evolves `steps` steps into a new state handle.
 *
 * # Safety
 * `state` and `coin` must be live handles and `out` valid for writes.
 */
enum WalkStatus walk_evolve(const struct WalkState *state,
                            const struct WalkCoin *coin,
                            size_t steps,
                            uint32_t engine,
                            struct WalkState **out);

/**
 * Smallest period up to `horizon`; writes 0 when there is none.
 *
 * # Safety
 * `state` and `coin` must be live handles; `period` and `residual` valid for writes.
 */
enum WalkStatus walk_detect_period(const struct WalkState *state,
                                   const struct WalkCoin *coin,
                                   size_t horizon,
                                   size_t *period,
                                   double *residual);

/**
 * Constant-root certificate on an M×M grid. `json_out` may be null; otherwise it
 * receives the full report, to be released with [`walk_string_free`].
 *
 * # Safety
 * `coin` must be a live handle and `has_constant_root` valid for writes.
 */
enum WalkStatus walk_certificate(const struct WalkCoin *coin,
                                 size_t grid,
                                 bool *has_constant_root,
                                 char **json_out);

/**
 * p_n = ‖Ψ_n(0,0)‖² on ℤ² for n < horizon, from `alpha` at the origin.
 *
 * # Safety
 * `coin` must be a live handle, `alpha` point to 8 doubles and `out` be valid for
 * `horizon` doubles.
 */
enum WalkStatus walk_return_probability(const struct WalkCoin *coin,
                                        const double *alpha,
                                        size_t horizon,
                                        double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WALKLAB_H */
