use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: String, got: String },

    #[error("coefficient matrix is not symmetric (max asymmetry {asymmetry:.3e}, tolerance {tolerance:.3e})")]
    NotSymmetric { asymmetry: f64, tolerance: f64 },

    #[error("degenerate spectrum: eigenvalue gap {gap:.3e} below threshold {threshold:.3e}")]
    DegenerateSpectrum { gap: f64, threshold: f64 },

    #[error("right-eigenvector matrix is singular to working precision")]
    SingularEigenbasis,

    #[error("bracket of mode {mode} is not real (imaginary part {imag:.3e})")]
    GammaNotReal { mode: usize, imag: f64 },

    #[error("Hamiltonian is not in the trap regime")]
    NotTrapRegime,

    #[error("alpha matrix is singular (condition number {condition:.3e})")]
    SingularAlphaMatrix { condition: f64 },

    #[error("extremal matrix solution is asymmetric ({asymmetry:.3e})")]
    AsymmetricSolution { asymmetry: f64 },

    #[error("real part of the extremal matrix is not positive definite (min eigenvalue {min_eigenvalue:.3e})")]
    NotNormalizable { min_eigenvalue: f64 },

    #[error("second-moment system is singular or inconsistent (residual {residual:.3e})")]
    SingularMomentSystem { residual: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("numerical breakdown: {0}")]
    NumericalBreakdown(String),

    #[error("grid too coarse: discretization residual {residual:.3e}")]
    GridTooCoarse { residual: f64 },

    #[error("range error: {0}")]
    RangeError(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable identifier for the error kind.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::NotSymmetric { .. } => "not_symmetric",
            Error::DegenerateSpectrum { .. } => "degenerate_spectrum",
            Error::SingularEigenbasis => "singular_eigenbasis",
            Error::GammaNotReal { .. } => "gamma_not_real",
            Error::NotTrapRegime => "not_trap_regime",
            Error::SingularAlphaMatrix { .. } => "singular_alpha_matrix",
            Error::AsymmetricSolution { .. } => "asymmetric_solution",
            Error::NotNormalizable { .. } => "not_normalizable",
            Error::SingularMomentSystem { .. } => "singular_moment_system",
            Error::InvalidParams(_) => "invalid_params",
            Error::NumericalBreakdown(_) => "numerical_breakdown",
            Error::GridTooCoarse { .. } => "grid_too_coarse",
            Error::RangeError(_) => "range_error",
            Error::Parse(_) => "parse_error",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
