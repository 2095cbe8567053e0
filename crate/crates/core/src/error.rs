use thiserror::Error;

/// Errors raised by the library. Check failures are not errors; they are
/// recorded in a [`crate::verify::VerificationReport`].
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{0} is not squarefree")]
    NotSquarefree(u64),
    #[error("repeated prime {0} in CRT moduli")]
    RepeatedPrime(u64),
    #[error("inexact division")]
    InexactDivision,
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("tree verification failed: {0}")]
    TreeVerification(String),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
