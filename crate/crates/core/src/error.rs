use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ThetaError {
    /// The input violates a parameter invariant.
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    /// A consequence guaranteed by the lifting theorems failed to hold.
    /// Never a valid state; indicates a bug.
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

impl ThetaError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        ThetaError::InvalidParam(msg.into())
    }

    pub(crate) fn inconsistent(msg: impl Into<String>) -> Self {
        ThetaError::InternalInconsistency(msg.into())
    }
}

pub type Result<T, E = ThetaError> = std::result::Result<T, E>;
