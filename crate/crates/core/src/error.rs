//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by validation and by numerical consistency checks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("modulus {0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("modulus {p} exceeds the configured limit {limit}")]
    ModulusTooLarge { p: u64, limit: u64 },
    #[error("division by zero in F_{0}")]
    DivisionByZero(u64),
    #[error("operands live over different prime fields")]
    FieldMismatch,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix does not preserve the symplectic form")]
    NotSymplectic,
    #[error("subspace is not isotropic")]
    NotIsotropic,
    #[error("coordinate index {index} out of range 1..={n}")]
    CoordinateOutOfRange { index: usize, n: usize },
    #[error("spaces do not match: {0}")]
    SpaceMismatch(String),
    #[error("operators are not proportional (relative residual {residual:.3e})")]
    NotProportional { residual: f64 },
    #[error("zero operator where a nonzero one is required")]
    ZeroOperator,
    #[error("intertwining solution space has dimension {found}, expected 1")]
    SolutionSpaceDimension { found: usize },
    #[error("singular value decomposition did not converge after {0} sweeps")]
    SvdNoConvergence(usize),
    #[error("operator is not Gaussian: {0}")]
    NotGaussian(String),
    #[error("relation is not perfect Lagrangian")]
    NotPerfectLagrangian,
    #[error("invalid {what}: {why}")]
    Invalid { what: &'static str, why: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(what: &'static str, why: impl Into<String>) -> Self {
        Error::Invalid {
            what,
            why: why.into(),
        }
    }

    pub(crate) fn dim(why: impl Into<String>) -> Self {
        Error::DimensionMismatch(why.into())
    }
}
