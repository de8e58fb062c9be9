use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An operation was applied outside its domain (inverse of zero, even q
    /// where odd is required, a point off the quadric, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Input that collapses to a lower-dimensional object than required.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// A certification check failed. `witness` names the offending objects.
    #[error("certification failed: {check}: {witness}")]
    Certification { check: String, witness: String },

    /// A constructive procedure did not find the object it searched for.
    #[error("construction failed: {0}")]
    Construction(String),

    /// Two independent computation routes disagreed, or an internal count
    /// did not match its closed form.
    #[error("internal consistency: {0}")]
    Internal(String),

    #[error("invalid input: {0}")]
    Validation(String),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn cert(check: impl Into<String>, witness: impl Into<String>) -> Self {
        Error::Certification {
            check: check.into(),
            witness: witness.into(),
        }
    }
}
