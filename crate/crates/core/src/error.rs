//! Error type shared by all solver modules.

use thiserror::Error;

/// Failure modes of the model builders and solvers.
#[derive(Debug, Error)]
pub enum Error {
    /// A matrix that must be Hermitian is not, beyond tolerance.
    #[error("matrix is not Hermitian: residual {residual:.3e} exceeds {tol:.1e}")]
    NotHermitian { residual: f64, tol: f64 },

    /// Mismatched matrix or vector dimensions.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A parameter is outside its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The spectrum could not be grouped into +/- eigenvalue pairs.
    #[error("eigenvalue pairing failed: {0}")]
    PairingFailure(String),

    /// The bilinear normalization of an eigenvector pair is degenerate
    /// (defective matrix / exceptional point), or the assembled mode
    /// matrix fails its canonical-structure validation.
    #[error("mode normalization failed: {0}")]
    NormalizationFailure(String),

    /// An initial covariance matrix violates the Majorana anticommutation
    /// constraint C + C^T = 2 I.
    #[error("covariance violates canonical anticommutation: residual {0:.3e}")]
    CarViolation(f64),

    /// The requested computation is outside the regime the closed-form
    /// path supports and no fallback applies.
    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    /// The damping matrix has an eigenvalue with non-negative real part,
    /// so no steady state exists.
    #[error("unstable drift: eigenvalue real part {0:.3e} >= {1:.1e}")]
    UnstableDrift(f64, f64),

    /// A quantity that must be real carries an imaginary residue beyond
    /// tolerance, signalling a decomposition bug upstream.
    #[error("imaginary residue too large: {0:.3e}")]
    ResidueTooLarge(f64),

    /// Brute-force oracle invoked beyond its hard size limit.
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    /// LAPACK backend failure.
    #[error("linear algebra backend: {0}")]
    Linalg(#[from] ndarray_linalg::error::LinalgError),
}

pub type Result<T> = std::result::Result<T, Error>;
