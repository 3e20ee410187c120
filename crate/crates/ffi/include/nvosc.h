#ifndef NVOSC_H
#define NVOSC_H

#pragma once

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes shared by all entry points.
typedef enum NvoscStatus {
  NVOSC_STATUS_OK = 0,
  NVOSC_STATUS_NULL_POINTER = 1,
  NVOSC_STATUS_INVALID_ARGUMENT = 2,
  NVOSC_STATUS_DOMAIN = 3,
  NVOSC_STATUS_DEGENERATE_SPECTRUM = 4,
  NVOSC_STATUS_NOT_OSCILLATORY = 5,
  NVOSC_STATUS_STEP_TOO_LARGE = 6,
  NVOSC_STATUS_GRID = 7,
  // The output buffers cannot hold the requested grid; the required length is reported.
  NVOSC_STATUS_BUFFER_TOO_SMALL = 8,
  NVOSC_STATUS_PANIC = 9,
} NvoscStatus;

// Velocity history on `[-a, 0]`.
typedef struct NvoscHistory NvoscHistory;

// Oscillator parameters together with their solved spectrum.
typedef struct NvoscSystem NvoscSystem;

// Outcome of `nvosc_verify_decay`. Tri-state flags use 1 = true, 0 = false,
// -1 = not evaluated (undamped system).
typedef struct NvoscDecaySummary {
  size_t rows;
  bool bounds_satisfied;
  bool undamped;
  int32_t tail_ok;
  int32_t envelope_decreasing;
  // `min(alpha, gamma, mu)`, NaN when undamped.
  double rho;
  double amplitude_scale;
  // Largest `|x|` over one period at the tail horizon, NaN when undamped.
  double tail_x;
} NvoscDecaySummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread, or null after a success.
// The pointer stays valid until the next call into this library on the same thread.
const char *nvosc_last_error_message(void);

// Validates `m, k, mu > 0`, `c >= 0` and solves the characteristic cubic.
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum NvoscStatus nvosc_system_new(double m,
                                  double c,
                                  double k,
                                  double mu,
                                  struct NvoscSystem **out);

// # Safety
// `sys` must come from `nvosc_system_new` and not be freed twice. Null is ignored.
void nvosc_system_free(struct NvoscSystem *sys);

// Writes the three roots; the complex pair comes first, positive imaginary part leading.
//
// # Safety
// `re` and `im` must each point to three writable doubles.
enum NvoscStatus nvosc_system_roots(const struct NvoscSystem *sys, double *re, double *im);

// Writes the residues matching the order of `nvosc_system_roots`.
//
// # Safety
// `re` and `im` must each point to three writable doubles.
enum NvoscStatus nvosc_system_residues(const struct NvoscSystem *sys, double *re, double *im);

// # Safety
// `out` must be a valid pointer.
enum NvoscStatus nvosc_system_is_oscillatory(const struct NvoscSystem *sys, bool *out);

// Impulse response `h(t)`, `t >= 0`.
//
// # Safety
// `out` must be a valid pointer.
enum NvoscStatus nvosc_impulse_response(const struct NvoscSystem *sys, double t, double *out);

// `v(t) = value` on `[-a, 0]`.
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum NvoscStatus nvosc_history_constant(double a, double value, struct NvoscHistory **out);

// `v(t) = amplitude sin(omega t + phase)` on `[-a, 0]`.
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum NvoscStatus nvosc_history_sine(double a,
                                    double amplitude,
                                    double omega,
                                    double phase,
                                    struct NvoscHistory **out);

// `v(t) = sum coefficients[n] t^n` on `[-a, 0]`.
//
// # Safety
// `coefficients` must point to `len` readable doubles; `out` must be valid.
enum NvoscStatus nvosc_history_polynomial(double a,
                                          const double *coefficients,
                                          size_t len,
                                          struct NvoscHistory **out);

// Velocities at `len >= 2` equally spaced times from `-a` to `0`, linearly interpolated.
//
// # Safety
// `values` must point to `len` readable doubles; `out` must be valid.
enum NvoscStatus nvosc_history_samples(double a,
                                       const double *values,
                                       size_t len,
                                       struct NvoscHistory **out);

// # Safety
// `history` must come from an `nvosc_history_*` constructor and not be freed twice. Null is ignored.
void nvosc_history_free(struct NvoscHistory *history);

// Largest `|v|` on `[-a, 0]`.
//
// # Safety
// `history` and `out` must be valid pointers.
enum NvoscStatus nvosc_history_sup_norm(const struct NvoscHistory *history, double *out);

// History weight `W = mu * integral of e^{mu tau} v(tau)`; the initialization force is `W e^{-mu t}`.
//
// # Safety
// `sys` and `out` must be valid; `history` may be null for a quiescent past.
enum NvoscStatus nvosc_history_weight(const struct NvoscSystem *sys,
                                      const struct NvoscHistory *history,
                                      double *out);

// Closed-form free response `x(t)` and `x'(t)`.
//
// # Safety
// `sys`, `x` and `xdot` must be valid; `history` may be null.
enum NvoscStatus nvosc_response(const struct NvoscSystem *sys,
                                const struct NvoscHistory *history,
                                double x0,
                                double v0,
                                double t,
                                double *x,
                                double *xdot);

// Number of grid points `0, dt, ..., t_end` used by the trajectory functions.
//
// # Safety
// `out` must be a valid pointer.
enum NvoscStatus nvosc_grid_len(double t_end, double dt, size_t *out);

// Closed-form trajectory on `0, dt, ..., t_end`. `written` receives the point
// count even when the buffers are too small.
//
// # Safety
// `t`, `x`, `xdot` must each hold `capacity` doubles; `written` must be valid;
// `history` may be null.
enum NvoscStatus nvosc_trajectory(const struct NvoscSystem *sys,
                                  const struct NvoscHistory *history,
                                  double x0,
                                  double v0,
                                  double t_end,
                                  double dt,
                                  double *t,
                                  double *x,
                                  double *xdot,
                                  size_t capacity,
                                  size_t *written);

// Runge-Kutta reference trajectory, same layout as `nvosc_trajectory`.
//
// # Safety
// As for `nvosc_trajectory`.
enum NvoscStatus nvosc_oracle_trajectory(const struct NvoscSystem *sys,
                                         const struct NvoscHistory *history,
                                         double x0,
                                         double v0,
                                         double t_end,
                                         double dt,
                                         double *t,
                                         double *x,
                                         double *xdot,
                                         size_t capacity,
                                         size_t *written);

// Checks the decay bounds on the grid and the tail behaviour.
//
// # Safety
// `sys` and `out` must be valid; `history` may be null.
enum NvoscStatus nvosc_verify_decay(const struct NvoscSystem *sys,
                                    const struct NvoscHistory *history,
                                    double x0,
                                    double v0,
                                    double t_end,
                                    double dt,
                                    struct NvoscDecaySummary *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NVOSC_H */
