#ifndef RETURNCTRL_H
#define RETURNCTRL_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Status codes. The positive ones match the CLI exit codes.
 */
typedef enum RcStatus {
  RC_STATUS_OK = 0,
  /**
   * invalid configuration, parameters or I/O
   */
  RC_STATUS_CONFIG = 2,
  /**
   * the reference trajectory or frozen coefficients could not be built
   */
  RC_STATUS_CONSTRUCTION = 3,
  /**
   * an iteration did not converge
   */
  RC_STATUS_CONVERGENCE = 4,
  /**
   * a required pointer was null
   */
  RC_STATUS_NULL_ARGUMENT = 10,
  /**
   * a string argument was not UTF-8
   */
  RC_STATUS_INVALID_UTF8 = 11,
  /**
   * caller buffer too small
   */
  RC_STATUS_BUFFER_TOO_SMALL = 12,
  /**
   * internal panic; the handle arguments are left untouched
   */
  RC_STATUS_PANIC = 99,
} RcStatus;

/**
 * Which trajectory field to copy out.
 */
typedef enum RcField {
  RC_FIELD_U_BAR = 0,
  RC_FIELD_V_BAR = 1,
  RC_FIELD_H_BAR = 2,
} RcField;

/**
 * Run configuration.
 */
typedef struct RcConfig RcConfig;

/**
 * Finished command run.
 */
typedef struct RcRun RcRun;

/**
 * Reference trajectory sampled on the configured grid.
 */
typedef struct RcTrajectory RcTrajectory;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. Valid until the
 * next call into the library from the same thread.
 */
const char *rc_last_error(void);

/**
 * Library version, a static string.
 */
const char *rc_version(void);

/**
 * Default configuration.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum RcStatus rc_config_default(struct RcConfig **out);

/**
 * Parses and validates a TOML configuration.
 *
 * # Safety
 * `toml` must be a NUL-terminated string and `out` writable.
 */
enum RcStatus rc_config_from_toml(const char *toml, struct RcConfig **out);

/**
 * Sets the command by its CLI name, e.g. `"solve-control"`.
 *
 * # Safety
 * `cfg` must come from this library; `name` must be NUL-terminated.
 */
enum RcStatus rc_config_set_command(struct RcConfig *cfg, const char *name);

/**
 * Sets the output directory of [`rc_run`].
 *
 * # Safety
 * `cfg` must come from this library; `dir` must be NUL-terminated.
 */
enum RcStatus rc_config_set_out(struct RcConfig *cfg, const char *dir);

/**
 * Sets the seed.
 *
 * # Safety
 * `cfg` must come from this library.
 */
enum RcStatus rc_config_set_seed(struct RcConfig *cfg, uint64_t seed);

/**
 * # Safety
 * `cfg` must come from this library or be null; it is invalid afterwards.
 */
void rc_config_free(struct RcConfig *cfg);

/**
 * Runs the configured command and writes its artifacts. A run that writes
 * its results but fails afterwards (a Picard budget exhausted) still
 * returns the error status and no handle.
 *
 * # Safety
 * `cfg` must come from this library; `out` must be writable.
 */
enum RcStatus rc_run(const struct RcConfig *cfg, struct RcRun **out);

/**
 * Summary JSON of a run, owned by the handle.
 *
 * # Safety
 * `run` must come from this library.
 */
const char *rc_run_summary_json(const struct RcRun *run);

/**
 * # Safety
 * `run` must come from this library or be null.
 */
void rc_run_free(struct RcRun *run);

/**
 * Builds the reference trajectory of `cfg.kind` on the configured grid.
 *
 * # Safety
 * `cfg` must come from this library; `out` must be writable.
 */
enum RcStatus rc_trajectory_build(const struct RcConfig *cfg, struct RcTrajectory **out);

/**
 * Grid shape: interior nodes per level, number of time levels and whether
 * values are complex.
 *
 * # Safety
 * `t` must come from this library; the output pointers must be writable.
 */
enum RcStatus rc_trajectory_shape(const struct RcTrajectory *t,
                                  uintptr_t *nx,
                                  uintptr_t *levels,
                                  bool *is_complex);

/**
 * Copies a field into `buf`, level-major (`buf[n * nx + j]`), with
 * `(re, im)` pairs for complex trajectories. `len` counts doubles.
 *
 * # Safety
 * `t` must come from this library and `buf` must hold `len` doubles.
 */
enum RcStatus rc_trajectory_copy_field(const struct RcTrajectory *t,
                                       enum RcField which,
                                       double *buf,
                                       uintptr_t len);

/**
 * Max-norm of a field, or a negative value for a null handle.
 *
 * # Safety
 * `t` must come from this library or be null.
 */
double rc_trajectory_sup_norm(const struct RcTrajectory *t, enum RcField which);

/**
 * # Safety
 * `t` must come from this library or be null.
 */
void rc_trajectory_free(struct RcTrajectory *t);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RETURNCTRL_H */
