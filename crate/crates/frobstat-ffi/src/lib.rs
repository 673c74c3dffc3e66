//! C ABI over the frobstat library.
//!
//! Conventions:
//!
//! * Models are opaque handles created by `frob_model_*` constructors and
//!   released with `frob_model_free`.
//! * Every fallible call returns a [`FrobStatus`]; results land in caller
//!   out-pointers. Tensor buffers are dense row-major `f64` arrays whose
//!   length the caller must size from `frob_model_dim` (`n²` for the
//!   metric, `n³` for the AC tensor).
//! * `frob_status_message` maps a status to a static description.
//!
//! The header `include/frobstat.h` is regenerated by the build script.

use frobstat::analysis::{bec_asymptote, bose_yukawa_closed_form, wdvv_residual};
use frobstat::geometry::{
    ac_tensor_at, alpha_connection_at, metric_at, riemann_curvature, yukawa_term, PointGeometry,
};
use frobstat::models::{BoseIdealGas, ClassicalIdealGas, Potential, SyntheticPotential, Units};
use frobstat::Error;
use std::ffi::{c_char, CStr};

/// Status code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrobStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Input outside the mathematical domain of the operation.
    DomainError = 3,
    /// Buffer or coordinate length does not match the model dimension.
    DimensionMismatch = 4,
    /// The Hessian failed the symmetric positive-definite check.
    NotPositiveDefinite = 5,
    /// A numerical procedure lost precision or failed to converge.
    NumericalError = 6,
    /// The model configuration file could not be parsed.
    ConfigError = 7,
    /// The configuration file could not be read.
    IoError = 8,
}

impl From<&Error> for FrobStatus {
    fn from(err: &Error) -> Self {
        match err {
            Error::Domain(_) => FrobStatus::DomainError,
            Error::DimensionMismatch { .. } => FrobStatus::DimensionMismatch,
            Error::NotPositiveDefinite(_) => FrobStatus::NotPositiveDefinite,
            Error::Numerical(_) => FrobStatus::NumericalError,
            Error::Config(_) => FrobStatus::ConfigError,
            Error::Io(_) => FrobStatus::IoError,
            Error::Json(_) => FrobStatus::ConfigError,
        }
    }
}

/// Physical constants of the thermal wavelength; use `frob_units_reduced`
/// for `h = m = k_B = 1`.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct FrobUnits {
    pub h: f64,
    pub m: f64,
    pub k_b: f64,
}

/// Opaque model handle.
pub struct FrobModel {
    inner: Box<dyn Potential>,
}

/// Reduced units `h = m = k_B = 1`.
#[no_mangle]
pub extern "C" fn frob_units_reduced() -> FrobUnits {
    FrobUnits {
        h: 1.0,
        m: 1.0,
        k_b: 1.0,
    }
}

fn units_of(units: FrobUnits) -> Result<Units, FrobStatus> {
    Units::physical(units.h, units.m, units.k_b).map_err(|e| FrobStatus::from(&e))
}

/// Classical ideal gas model; returns null if the units are invalid.
#[no_mangle]
pub extern "C" fn frob_model_classical(units: FrobUnits) -> *mut FrobModel {
    match units_of(units) {
        Ok(u) => Box::into_raw(Box::new(FrobModel {
            inner: Box::new(ClassicalIdealGas::with_units(u)),
        })),
        Err(_) => std::ptr::null_mut(),
    }
}

/// Quantum bosonic ideal gas model; returns null if the units are invalid.
#[no_mangle]
pub extern "C" fn frob_model_bose(units: FrobUnits) -> *mut FrobModel {
    match units_of(units) {
        Ok(u) => Box::into_raw(Box::new(FrobModel {
            inner: Box::new(BoseIdealGas::with_units(u)),
        })),
        Err(_) => std::ptr::null_mut(),
    }
}

/// Load a synthetic polynomial potential from a config file.
///
/// # Safety
/// `path` must point to a NUL-terminated string and `out` to writable
/// storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn frob_model_synthetic_from_file(
    path: *const c_char,
    out: *mut *mut FrobModel,
) -> FrobStatus {
    if path.is_null() || out.is_null() {
        return FrobStatus::NullPointer;
    }
    let path = match CStr::from_ptr(path).to_str() {
        Ok(p) => p,
        Err(_) => return FrobStatus::InvalidUtf8,
    };
    match SyntheticPotential::from_config_file(path) {
        Ok(model) => {
            *out = Box::into_raw(Box::new(FrobModel {
                inner: Box::new(model),
            }));
            FrobStatus::Ok
        }
        Err(err) => FrobStatus::from(&err),
    }
}

/// Release a model handle. Null is accepted and ignored.
///
/// # Safety
/// `model` must have been produced by a `frob_model_*` constructor and not
/// freed before.
#[no_mangle]
pub unsafe extern "C" fn frob_model_free(model: *mut FrobModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Coordinate dimension of a model (0 for null).
///
/// # Safety
/// `model` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn frob_model_dim(model: *const FrobModel) -> usize {
    if model.is_null() {
        0
    } else {
        (*model).inner.dim()
    }
}

unsafe fn coords<'a>(
    model: *const FrobModel,
    x: *const f64,
    len: usize,
) -> Result<(&'a dyn Potential, &'a [f64]), FrobStatus> {
    if model.is_null() || x.is_null() {
        return Err(FrobStatus::NullPointer);
    }
    let model = (*model).inner.as_ref();
    if len != model.dim() {
        return Err(FrobStatus::DimensionMismatch);
    }
    Ok((model, std::slice::from_raw_parts(x, len)))
}

/// Hessian metric at `x`; writes `len × len` values row-major to `out`.
///
/// # Safety
/// `model` must be live, `x` must hold `len` values, and `out` must hold
/// `len * len` writable values.
#[no_mangle]
pub unsafe extern "C" fn frob_metric(
    model: *const FrobModel,
    x: *const f64,
    len: usize,
    out: *mut f64,
) -> FrobStatus {
    if out.is_null() {
        return FrobStatus::NullPointer;
    }
    let (model, x) = match coords(model, x, len) {
        Ok(v) => v,
        Err(status) => return status,
    };
    match metric_at(model, x) {
        Ok(metric) => {
            let n = metric.dim();
            let out = std::slice::from_raw_parts_mut(out, n * n);
            for i in 0..n {
                for j in 0..n {
                    out[i * n + j] = metric.g()[[i, j]];
                }
            }
            FrobStatus::Ok
        }
        Err(err) => FrobStatus::from(&err),
    }
}

/// Amari-Chentsov tensor at `x`; writes `len³` values to `out` with index
/// `(i*len + j)*len + k`.
///
/// # Safety
/// `model` must be live, `x` must hold `len` values, and `out` must hold
/// `len³` writable values.
#[no_mangle]
pub unsafe extern "C" fn frob_ac_tensor(
    model: *const FrobModel,
    x: *const f64,
    len: usize,
    out: *mut f64,
) -> FrobStatus {
    if out.is_null() {
        return FrobStatus::NullPointer;
    }
    let (model, x) = match coords(model, x, len) {
        Ok(v) => v,
        Err(status) => return status,
    };
    match ac_tensor_at(model, x) {
        Ok(ac) => {
            let n = ac.dim();
            let out = std::slice::from_raw_parts_mut(out, n * n * n);
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        out[(i * n + j) * n + k] = ac.get(i, j, k);
                    }
                }
            }
            FrobStatus::Ok
        }
        Err(err) => FrobStatus::from(&err),
    }
}

/// Yukawa term `C_ijk C^ijk − C_i C^i` at `x`.
///
/// # Safety
/// `model` must be live, `x` must hold `len` values, `out` one value.
#[no_mangle]
pub unsafe extern "C" fn frob_yukawa(
    model: *const FrobModel,
    x: *const f64,
    len: usize,
    out: *mut f64,
) -> FrobStatus {
    if out.is_null() {
        return FrobStatus::NullPointer;
    }
    let (model, x) = match coords(model, x, len) {
        Ok(v) => v,
        Err(status) => return status,
    };
    match PointGeometry::at(model, x) {
        Ok(point) => {
            *out = yukawa_term(&point.metric, &point.ac).value();
            FrobStatus::Ok
        }
        Err(err) => FrobStatus::from(&err),
    }
}

/// WDVV (associativity) residual at `x`: worst absolute violation and the
/// scale-normalized companion.
///
/// # Safety
/// `model` must be live, `x` must hold `len` values; out-pointers may be
/// null individually to skip that output.
#[no_mangle]
pub unsafe extern "C" fn frob_wdvv_residual(
    model: *const FrobModel,
    x: *const f64,
    len: usize,
    out_max_abs: *mut f64,
    out_scaled: *mut f64,
) -> FrobStatus {
    let (model, x) = match coords(model, x, len) {
        Ok(v) => v,
        Err(status) => return status,
    };
    match wdvv_residual(model, x) {
        Ok(residual) => {
            if !out_max_abs.is_null() {
                *out_max_abs = residual.max_abs;
            }
            if !out_scaled.is_null() {
                *out_scaled = residual.scaled;
            }
            FrobStatus::Ok
        }
        Err(err) => FrobStatus::from(&err),
    }
}

/// Max-abs Riemann curvature of the α-connection at `x`.
///
/// # Safety
/// `model` must be live, `x` must hold `len` values, `out` one value.
#[no_mangle]
pub unsafe extern "C" fn frob_curvature_max_abs(
    model: *const FrobModel,
    x: *const f64,
    len: usize,
    alpha: f64,
    out: *mut f64,
) -> FrobStatus {
    if out.is_null() {
        return FrobStatus::NullPointer;
    }
    let (model, x) = match coords(model, x, len) {
        Ok(v) => v,
        Err(status) => return status,
    };
    match alpha_connection_at(model, x, alpha) {
        Ok(conn) => {
            *out = riemann_curvature(&conn).max_abs();
            FrobStatus::Ok
        }
        Err(err) => FrobStatus::from(&err),
    }
}

/// Polylogarithm `Li_s(η)` on `η ∈ [0, 1]`.
///
/// # Safety
/// `out` must point to one writable value.
#[no_mangle]
pub unsafe extern "C" fn frob_polylog(s: f64, eta: f64, out: *mut f64) -> FrobStatus {
    if out.is_null() {
        return FrobStatus::NullPointer;
    }
    match frobstat::special::polylog(s, eta) {
        Ok(value) => {
            *out = value;
            FrobStatus::Ok
        }
        Err(err) => FrobStatus::from(&err),
    }
}

/// Closed-form Yukawa term of the quantum gas at `(β, γ)`.
///
/// # Safety
/// `out` must point to one writable value.
#[no_mangle]
pub unsafe extern "C" fn frob_bose_yukawa_closed_form(
    beta: f64,
    gamma: f64,
    units: FrobUnits,
    out: *mut f64,
) -> FrobStatus {
    if out.is_null() {
        return FrobStatus::NullPointer;
    }
    let units = match units_of(units) {
        Ok(u) => u,
        Err(status) => return status,
    };
    match bose_yukawa_closed_form(beta, gamma, units) {
        Ok(value) => {
            *out = value;
            FrobStatus::Ok
        }
        Err(err) => FrobStatus::from(&err),
    }
}

/// Condensation-onset asymptote `2ζ(3/2)λ³/(5√π ζ(5/2) γ^{1/2})`.
///
/// # Safety
/// `out` must point to one writable value.
#[no_mangle]
pub unsafe extern "C" fn frob_bec_asymptote(
    beta: f64,
    gamma: f64,
    units: FrobUnits,
    out: *mut f64,
) -> FrobStatus {
    if out.is_null() {
        return FrobStatus::NullPointer;
    }
    let units = match units_of(units) {
        Ok(u) => u,
        Err(status) => return status,
    };
    match bec_asymptote(beta, gamma, units) {
        Ok(value) => {
            *out = value;
            FrobStatus::Ok
        }
        Err(err) => FrobStatus::from(&err),
    }
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn frob_status_message(status: FrobStatus) -> *const c_char {
    let message: &'static CStr = match status {
        FrobStatus::Ok => c"ok",
        FrobStatus::NullPointer => c"null pointer argument",
        FrobStatus::InvalidUtf8 => c"string argument is not valid UTF-8",
        FrobStatus::DomainError => c"input outside the operation's domain",
        FrobStatus::DimensionMismatch => c"dimension mismatch",
        FrobStatus::NotPositiveDefinite => c"Hessian is not symmetric positive-definite",
        FrobStatus::NumericalError => c"numerical procedure failed",
        FrobStatus::ConfigError => c"could not parse model configuration",
        FrobStatus::IoError => c"could not read model configuration",
    };
    message.as_ptr()
}
