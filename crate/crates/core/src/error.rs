//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by the library. Verification *failures* are never errors:
/// they are reported as data in the various report types.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("pole: {0}")]
    Pole(String),
    #[error("bad leading term: {0}")]
    BadLeadingTerm(String),
    #[error("not factorable into (1 - q^k z) factors: {0}")]
    NonFactorable(String),
    #[error("invalid Dynkin data: {0}")]
    InvalidDynkin(String),
    #[error("node {node} out of range for rank {rank}")]
    NodeOutOfRange { node: usize, rank: usize },
    #[error("support outside the subdiagram: {0}")]
    Support(String),
    #[error("not in the expected image: {0}")]
    NotInImage(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unknown name: {0}")]
    UnknownName(String),
    #[error("order exceeded: {0}")]
    OrderExceeded(String),
    #[error("negative multiplicity: {0}")]
    NegativeMultiplicity(String),
}

pub type Result<T> = std::result::Result<T, Error>;
