use thiserror::Error;

use crate::spectral::DomainVerdict;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("{0}")]
    InvalidParameter(String),

    #[error("empty region grid")]
    EmptyGrid,

    #[error("degenerate interval [{lo}, {hi}]")]
    DegenerateInterval { lo: f64, hi: f64 },

    #[error("eigenvalue {index} is not representable as a finite double")]
    Unrepresentable { index: usize },

    #[error("coordinate {index} lies outside the {dim}-dimensional space")]
    OutsideSpace { index: usize, dim: usize },

    #[error("coefficient {index} overflowed")]
    Overflow { index: usize },

    #[error("vector not in the domain of the symbol: {verdict:?}")]
    DomainRefused { verdict: DomainVerdict },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("found {found} witnesses, needed {needed}; increase the scan limit")]
    InsufficientWitnesses { found: usize, needed: usize },

    #[error("witness regime mismatch: expected {expected}, got {actual}")]
    RegimeMismatch { expected: &'static str, actual: String },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
