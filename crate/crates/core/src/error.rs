use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// A hypothesis of the underlying theorem is not met, so no bound applies.
    #[error("hypothesis violation: {0}")]
    Hypothesis(String),
    /// Structural precondition on lattices or embeddings is not met.
    #[error("precondition violation: {0}")]
    Precondition(String),
    #[error("malformed JSON: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
