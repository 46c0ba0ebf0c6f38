use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,

    #[error("cannot parse rational {0:?}: expected \"num/den\" or an integer")]
    ParseRational(String),

    #[error("Farey sequence of order {0} has no interior points")]
    EmptyFarey(u64),

    #[error("invalid spaced set: {0}")]
    InvalidSpacedSet(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("bound uncomputable at this scale: sup r(n) needed up to {needed}, table limit is {limit}")]
    Uncomputable { needed: u64, limit: u64 },

    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
