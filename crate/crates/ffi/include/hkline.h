#ifndef HKLINE_H
#define HKLINE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result codes shared by all entry points.
 */
typedef enum HklStatus {
  HKL_STATUS_OK = 0,
  HKL_STATUS_NULL_POINTER = 1,
  HKL_STATUS_INVALID_ARGUMENT = 2,
  HKL_STATUS_DOMAIN = 3,
  HKL_STATUS_MODEL = 4,
  HKL_STATUS_POLE = 5,
  HKL_STATUS_NO_CONVERGENCE = 6,
  HKL_STATUS_CONFIG = 7,
  HKL_STATUS_NUMERICAL = 8,
  HKL_STATUS_IO = 9,
  HKL_STATUS_BUFFER_TOO_SMALL = 10,
  HKL_STATUS_PANIC = 11,
} HklStatus;

/**
 * Opaque Gibbons–Hawking configuration.
 */
typedef struct HklGhConfig HklGhConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failure on this thread, or null. Valid until the next call on this thread.
 */
const char *hkl_last_error(void);

/**
 * Static name of a status code; "unknown" for values outside [`HklStatus`].
 */
const char *hkl_status_name(int32_t code);

/**
 * Creates a configuration with strictly increasing centers on the x₁-axis and constant `c`.
 *
 * # Safety
 * `centers` must point to `count` doubles and `out` must be writable.
 */
enum HklStatus hkl_gh_config_new(const double *centers,
                                 size_t count,
                                 double c,
                                 struct HklGhConfig **out);

/**
 * Releases a configuration. Null is ignored.
 *
 * # Safety
 * `cfg` must come from [`hkl_gh_config_new`] and not be used afterwards.
 */
void hkl_gh_config_free(struct HklGhConfig *cfg);

/**
 * Number of centers.
 *
 * # Safety
 * `cfg` must be a live handle and `out` writable.
 */
enum HklStatus hkl_gh_num_centers(const struct HklGhConfig *cfg, size_t *out);

/**
 * Harmonic potential V at `x[3]`.
 *
 * # Safety
 * `cfg` must be a live handle, `x` must hold 3 doubles and `out` must be writable.
 */
enum HklStatus hkl_gh_potential(const struct HklGhConfig *cfg, const double *x, double *out);

/**
 * Value of the lifted-rotation function f at `x[3]` (defined on the axis).
 *
 * # Safety
 * As for [`hkl_gh_potential`].
 */
enum HklStatus hkl_gh_rotation_f(const struct HklGhConfig *cfg, const double *x, double *out);

/**
 * Integral of ω₁ over the sphere above segment `segment`, computed on a `resolution`-node grid.
 *
 * # Safety
 * `cfg` must be a live handle and `out` writable.
 */
enum HklStatus hkl_gh_period(const struct HklGhConfig *cfg,
                             size_t segment,
                             size_t resolution,
                             double *out);

/**
 * Largest self-dual component of the invariant curvature at `(x[3], theta)`, using a
 * fourth-order stencil with step `h`.
 *
 * # Safety
 * As for [`hkl_gh_potential`].
 */
enum HklStatus hkl_gh_asd_residual(const struct HklGhConfig *cfg,
                                   const double *x,
                                   double theta,
                                   double h,
                                   double *out);

/**
 * Sign assignment on the extended diagram named by `diagram` (e.g. "A3", "D5", "E8").
 *
 * On success `*len` is the node count and `*solvable` tells whether signs exist;
 * `signs` receives ±1 per node when solvable. Returns `BufferTooSmall` with `*len`
 * set when `capacity` is short.
 *
 * # Safety
 * `diagram` must be a NUL-terminated string, `signs` must hold `capacity` ints,
 * and `len` and `solvable` must be writable.
 */
enum HklStatus hkl_dynkin_signs(const char *diagram,
                                int32_t *signs,
                                size_t capacity,
                                size_t *len,
                                bool *solvable);

/**
 * Transition function g_UV = exp(−Σ vᵢξᵢ / 2ζ). `v` and `xi` hold `n` complex
 * numbers as interleaved (re, im) pairs.
 *
 * # Safety
 * `v` and `xi` must hold `2n` doubles; `out_re` and `out_im` must be writable.
 */
enum HklStatus hkl_transition_guv(const double *v,
                                  const double *xi,
                                  size_t n,
                                  double zeta_re,
                                  double zeta_im,
                                  double *out_re,
                                  double *out_im);

/**
 * Runs a verification suite configured by `key = value` text and returns the JSON
 * report in `*json` (release with [`hkl_string_free`]). `*pass` receives the verdict.
 * Failing checks are reported through `*pass`, not the status.
 *
 * # Safety
 * `config_text` must be a NUL-terminated string; `json` and `pass` must be writable.
 */
enum HklStatus hkl_run_suite(const char *config_text, char **json, bool *pass);

/**
 * Frees a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void hkl_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HKLINE_H */
