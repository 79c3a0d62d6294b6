//! Error type shared by every module of the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// All failure modes of the simulator core.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An eigenpair's left and right vectors are (numerically) orthogonal:
    /// the matrix is defective, i.e. sits at an exceptional point.
    #[error("defective matrix: left-right eigenvector overlap {overlap:.3e} below tolerance {tol:.3e} (exceptional point)")]
    Defective { overlap: f64, tol: f64 },

    /// Iterative eigensolver exhausted its iteration budget.
    #[error("eigensolver failed to converge within {iterations} iterations")]
    NonConvergence { iterations: usize },

    /// A matrix required to be Hermitian is not.
    #[error("matrix is not Hermitian: max |M - M^H| = {defect:.3e} exceeds {tol:.3e}")]
    NotHermitian { defect: f64, tol: f64 },

    /// Requested integrator step violates the stability bound.
    #[error("time step too large: |H|*dt = {norm_dt:.3e} exceeds 0.5")]
    StepTooLarge { norm_dt: f64 },

    /// Non-finite amplitudes appeared during propagation.
    #[error("overflow: non-finite amplitudes encountered during propagation")]
    Overflow,

    /// The imaginary potential reaches or exceeds the rung hopping, where the
    /// dimer becomes defective and the mode angle is undefined.
    #[error("exceptional point: gamma = {gamma} >= J = {j}; theta = arcsin(gamma/J) is undefined and the cluster is defective")]
    ExceptionalPoint { gamma: f64, j: f64 },

    /// A coupling pair is out of range, duplicated, or not strictly ordered.
    #[error("malformed coupling ({a}, {b}): {reason}")]
    MalformedCoupling { a: usize, b: usize, reason: &'static str },

    /// A cluster matrix has eigenvalues off the real axis beyond tolerance,
    /// so it is outside the pseudo-Hermitian (real-spectrum) regime.
    #[error("cluster spectrum is not real: max |Im eigenvalue| = {max_imag:.3e} exceeds {tol:.3e}")]
    ComplexSpectrum { max_imag: f64, tol: f64 },

    /// The spectral evolution path cannot be built (defective cluster).
    #[error("spectral method unavailable: {reason}")]
    SpectralUnavailable { reason: String },

    /// Mode coefficients are not normalized to unit total weight.
    #[error("coefficients not normalized: total weight {total} differs from 1 beyond {tol:.3e}")]
    NotNormalized { total: f64, tol: f64 },

    /// Operation requires a two-site (ladder-shaped) cluster.
    #[error("wrong network shape: cluster dimension {cluster_dim} where 2 (ladder) is required")]
    WrongShape { cluster_dim: usize },

    /// Structural validation failure (dimensions, finiteness, index ranges).
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}
