/* C interface to the frobstat statistical-manifold library. */

#ifndef FROBSTAT_H
#define FROBSTAT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code of every fallible call.
typedef enum FrobStatus {
  FROB_STATUS_OK = 0,
  // A required pointer argument was null.
  FROB_STATUS_NULL_POINTER = 1,
  // A string argument was not valid UTF-8.
  FROB_STATUS_INVALID_UTF8 = 2,
  // Input outside the mathematical domain of the operation.
  FROB_STATUS_DOMAIN_ERROR = 3,
  // Buffer or coordinate length does not match the model dimension.
  FROB_STATUS_DIMENSION_MISMATCH = 4,
  // The Hessian failed the symmetric positive-definite check.
  FROB_STATUS_NOT_POSITIVE_DEFINITE = 5,
  // A numerical procedure lost precision or failed to converge.
  FROB_STATUS_NUMERICAL_ERROR = 6,
  // The model configuration file could not be parsed.
  FROB_STATUS_CONFIG_ERROR = 7,
  // The configuration file could not be read.
  FROB_STATUS_IO_ERROR = 8,
} FrobStatus;

// Opaque model handle.
typedef struct FrobModel FrobModel;

// Physical constants of the thermal wavelength; use `frob_units_reduced`
// for `h = m = k_B = 1`.
typedef struct FrobUnits {
  double h;
  double m;
  double k_b;
} FrobUnits;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Reduced units `h = m = k_B = 1`.
struct FrobUnits frob_units_reduced(void);

// Classical ideal gas model; returns null if the units are invalid.
struct FrobModel *frob_model_classical(struct FrobUnits units);

// Quantum bosonic ideal gas model; returns null if the units are invalid.
struct FrobModel *frob_model_bose(struct FrobUnits units);

// Load a synthetic polynomial potential from a config file.
//
// # Safety
// `path` must point to a NUL-terminated string and `out` to writable
// storage for one pointer.
enum FrobStatus frob_model_synthetic_from_file(const char *path, struct FrobModel **out);

// Release a model handle. Null is accepted and ignored.
//
// # Safety
// `model` must have been produced by a `frob_model_*` constructor and not
// freed before.
void frob_model_free(struct FrobModel *model);

// Coordinate dimension of a model (0 for null).
//
// # Safety
// `model` must be a live handle or null.
size_t frob_model_dim(const struct FrobModel *model);

// Hessian metric at `x`; writes `len × len` values row-major to `out`.
//
// # Safety
// `model` must be live, `x` must hold `len` values, and `out` must hold
// `len * len` writable values.
enum FrobStatus frob_metric(const struct FrobModel *model,
                            const double *x,
                            size_t len,
                            double *out);

// Amari-Chentsov tensor at `x`; writes `len³` values to `out` with index
// `(i*len + j)*len + k`.
//
// # Safety
// `model` must be live, `x` must hold `len` values, and `out` must hold
// `len³` writable values.
enum FrobStatus frob_ac_tensor(const struct FrobModel *model,
                               const double *x,
                               size_t len,
                               double *out);

// Yukawa term `C_ijk C^ijk − C_i C^i` at `x`.
//
// # Safety
// `model` must be live, `x` must hold `len` values, `out` one value.
enum FrobStatus frob_yukawa(const struct FrobModel *model,
                            const double *x,
                            size_t len,
                            double *out);

// WDVV (associativity) residual at `x`: worst absolute violation and the
// scale-normalized companion.
//
// # Safety
// `model` must be live, `x` must hold `len` values; out-pointers may be
// null individually to skip that output.
enum FrobStatus frob_wdvv_residual(const struct FrobModel *model,
                                   const double *x,
                                   size_t len,
                                   double *out_max_abs,
                                   double *out_scaled);

// Max-abs Riemann curvature of the α-connection at `x`.
//
// # Safety
// `model` must be live, `x` must hold `len` values, `out` one value.
enum FrobStatus frob_curvature_max_abs(const struct FrobModel *model,
                                       const double *x,
                                       size_t len,
                                       double alpha,
                                       double *out);

// Polylogarithm `Li_s(η)` on `η ∈ [0, 1]`.
//
// # Safety
// `out` must point to one writable value.
enum FrobStatus frob_polylog(double s, double eta, double *out);

// Closed-form Yukawa term of the quantum gas at `(β, γ)`.
//
// # Safety
// `out` must point to one writable value.
enum FrobStatus frob_bose_yukawa_closed_form(double beta,
                                             double gamma,
                                             struct FrobUnits units,
                                             double *out);

// Condensation-onset asymptote `2ζ(3/2)λ³/(5√π ζ(5/2) γ^{1/2})`.
//
// # Safety
// `out` must point to one writable value.
enum FrobStatus frob_bec_asymptote(double beta, double gamma, struct FrobUnits units, double *out);

// Static description of a status code.
const char *frob_status_message(enum FrobStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FROBSTAT_H */
