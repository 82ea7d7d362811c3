use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(
        "truncation at N={max_level} leaks {leak:.3e} of the norm (tolerance {tolerance:.1e})"
    )]
    TruncationTooSmall {
        max_level: usize,
        leak: f64,
        tolerance: f64,
    },
    #[error("eigensolver did not converge after {sweeps} sweeps (residual {residual:.3e})")]
    NoConvergence { sweeps: usize, residual: f64 },
    #[error("shape mismatch: expected dimension {expected}, got {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("operator is not Hermitian (max asymmetry {0:.3e})")]
    NotHermitian(f64),
    #[error("invalid POVM: {0}")]
    InvalidPovm(String),
    #[error("negative probability {value:.3e} at outcome {index}")]
    NegativeProbability { index: usize, value: f64 },
    #[error("probabilities sum to {0}, not 1")]
    NotNormalized(f64),
    #[error("grid too coarse: quadrature differs from closed form by {0:.3e}")]
    GridTooCoarse(f64),
    #[error("quadrature not converged: refinement changed entries by {0:.3e}")]
    QuadratureNotConverged(f64),
    #[error("lambda must be positive, got {0}")]
    LambdaNonPositive(f64),
    #[error("lambda must be non-negative, got {0}")]
    LambdaNegative(f64),
    #[error("theta must lie in (0, pi/2], got {0}")]
    ThetaOutOfRange(f64),
    #[error("Hilbert dimension must be at least 1")]
    DimensionTooSmall,
    #[error("standard error must be positive, got {0}")]
    NonPositiveError(f64),
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
