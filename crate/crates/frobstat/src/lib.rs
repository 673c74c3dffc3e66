//! Frobenius-algebra structures on statistical manifolds.
//!
//! Starting from a convex potential in dually-flat coordinates (for the gas
//! models, the free energy per volume in the grand canonical ensemble) this
//! crate computes:
//!
//! * the Hessian metric `g_ij = ∂²Ψ` and the Amari-Chentsov tensor
//!   `C_ijk = ∂³Ψ`,
//! * the statistical product on tangent spaces and the Yukawa scalar
//!   `C = C_ijk C^ijk − C_i C^i`,
//! * α-connections, their duals, contravariant connections, Riemann
//!   curvature and dual parallel transport,
//! * WDVV (associativity) residuals and grid scans exportable to CSV/JSON.
//!
//! Two closed-form models are built in: the classical ideal gas
//! (`F = η λ⁻³`) and the quantum bosonic ideal gas (`F = Li_{5/2}(η) λ⁻³`),
//! whose Yukawa term diverges like `γ^{-1/2}` at the Bose-Einstein
//! condensation onset. User-supplied polynomial potentials are evaluated
//! through a finite-difference fallback.
//!
//! The [`special`] module carries the polylogarithm machinery (series plus
//! branch-point expansion) needed by the Bose gas on the whole fugacity
//! range `η ∈ [0, 1]`.

pub mod analysis;
pub mod geometry;
pub mod models;
pub mod special;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// An input lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A matrix expected to be symmetric positive-definite is not.
    #[error("matrix is not symmetric positive-definite: {0}")]
    NotPositiveDefinite(String),

    /// Vector/tensor dimensions do not agree.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A numerical procedure failed (lost precision, failed to converge,
    /// or tripped a consistency guard).
    #[error("numerical error: {0}")]
    Numerical(String),

    /// A model configuration file could not be parsed.
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
