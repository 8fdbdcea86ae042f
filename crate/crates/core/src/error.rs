use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid partition `{input}`: {reason}")]
    InvalidPartition { input: String, reason: String },

    #[error("inner partition ({inner}) is not contained in outer partition ({outer})")]
    NotContained { outer: String, inner: String },

    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A cost gate or configured limit refused the request.
    #[error("refused: {0}")]
    Refused(String),

    /// An internal consistency check failed; this indicates a bug, never bad input.
    #[error("self-test failure: {0}")]
    SelfTest(String),
}

impl Error {
    /// True when the error signals an internal consistency failure rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::SelfTest(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
