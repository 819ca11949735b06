use thiserror::Error;

use crate::connection::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Text that does not follow the grammar at all.
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    /// Well-formed input that breaks a structural invariant.
    #[error("invalid connection: {0}")]
    Invalid(ValidationReport),

    #[error("domain error: {0}")]
    Domain(String),

    /// The object exists in principle but is not reachable at this truncation.
    #[error("not in range: {0}")]
    NotInRange(String),

    #[error("node budget of {budget} exceeded")]
    BoundExceeded { budget: u64 },

    #[error("enumeration guard exceeded: {count} elements > {limit}")]
    GuardExceeded { count: usize, limit: usize },

    #[error("fusion chain incoherent at index {index}")]
    FusionIncoherent { index: usize },

    #[error("frozen witness is not a connection: {0}")]
    FrozenWitnessInvalid(ValidationReport),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
