use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("cannot parse scalar {input:?}: {reason}")]
pub struct ParseScalarError {
    pub input: String,
    pub reason: &'static str,
}

impl ParseScalarError {
    pub(crate) fn new(input: &str, reason: &'static str) -> Self {
        ParseScalarError {
            input: input.to_string(),
            reason,
        }
    }
}

/// Errors raised by the algebraic layer.  Failures of a property that is
/// being *decided* (Kähler, GK, nilradical, ...) are verdicts, not errors.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("contraction of a degree-0 form")]
    DegreeZero,
    #[error("Jacobi identity fails on basis triple ({}, {}, {})", .0[0] + 1, .0[1] + 1, .0[2] + 1)]
    Jacobi([usize; 3]),
    #[error("Lie algebra has not been validated")]
    NotValidated,
    #[error("Lie algebra is not solvable")]
    NotSolvable,
    #[error("candidate has codimension {0}; only codimension <= 2 is supported")]
    UnsupportedCodim(usize),
    #[error("endomorphism #{index} is not a derivation")]
    NotDerivation { index: usize },
    #[error("brackets of the new generators are incompatible with theta: {0}")]
    HomomorphismViolation(String),
    #[error("J does not square to -Id")]
    NotComplexStructure,
    #[error("metric is not symmetric")]
    NotSymmetric,
    #[error("metric is not positive definite")]
    NotPositiveDefinite,
    #[error("J is not compatible with the metric")]
    Incompatible,
    #[error("J is not integrable")]
    NotIntegrable,
    #[error("subspace is not J-invariant")]
    NotInvariant,
    #[error("subspace has codimension {0}, expected 2")]
    NotCodim2(usize),
    #[error("subspace has odd codimension {0}")]
    OddCodimension(usize),
    #[error("subspace is not an ideal")]
    NotIdeal,
    #[error("theta[{index}] is not skew-symmetric for the base metric")]
    NotSkew { index: usize },
    #[error("theta[{index}] does not preserve the base fundamental form")]
    NotSymplectic { index: usize },
    #[error("theta[{i}] and theta[{j}] do not commute")]
    NotCommuting { i: usize, j: usize },
    #[error("expected {expected} theta endomorphisms, found {found}")]
    ThetaCount { expected: usize, found: usize },
    #[error("extension base is not nilpotent")]
    BaseNotNilpotent,
    #[error("extension base is not SKT")]
    BaseNotSkt,
    #[error("constructed structure failed its SKT self-check")]
    ResultNotSkt,
    #[error("parameter {0} must be nonzero")]
    ZeroParameter(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Scalar(#[from] ParseScalarError),
}

pub type Result<T> = std::result::Result<T, Error>;
