use thiserror::Error;

/// Errors raised by the algebra, sampling and experiment layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("angle must be a finite number of radians, got {0}")]
    NonFiniteAngle(f64),

    #[error("expectation value {0} lies outside [-1, 1]")]
    ExpectationOutOfRange(f64),

    #[error("probability {0} lies outside [0, 1]")]
    ProbabilityOutOfRange(f64),

    #[error("invalid joint distribution: {0}")]
    InvalidDistribution(String),

    #[error("not a valid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("not a valid measurement operator: {0}")]
    InvalidOperator(String),

    #[error("ket is not normalized (norm {0})")]
    UnnormalizedKet(f64),

    #[error("outcome must be -1 or +1, got {0}")]
    InvalidOutcome(i64),

    #[error("unknown projection rule {0:?} (expected luders, vonneumann or null)")]
    UnknownRule(String),

    #[error("unknown measurement order {0:?} (expected afirst, bfirst or random)")]
    UnknownOrder(String),

    #[error("cannot estimate a correlation from an empty trial list")]
    EmptyRecords,

    #[error("invalid experiment configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
