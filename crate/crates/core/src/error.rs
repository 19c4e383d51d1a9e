use thiserror::Error;

use crate::su::SuCondition;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A dense operation was requested above the configured qubit cap.
    #[error("{what} on {requested} qubits exceeds the limit of {limit}")]
    ResourceLimit {
        what: &'static str,
        requested: usize,
        limit: usize,
    },

    #[error("dimension {0} is not a power of two")]
    UnsupportedDimension(usize),

    #[error("{0} is outside the span of the traceless generators")]
    OutOfSpan(String),

    #[error("condition {condition} violated by {violation:e}")]
    ContractViolation {
        condition: SuCondition,
        violation: f64,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
