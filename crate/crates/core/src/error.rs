use thiserror::Error;

/// Errors raised by the library. Every variant carries a human readable
/// message; [`Error::kind`] gives a stable machine-readable tag.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("out of domain: {0}")]
    Domain(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Malformed(_) => "malformed-input",
            Error::InvalidQuery(_) => "invalid-query",
            Error::Domain(_) => "domain",
            Error::Verification(_) => "verification",
            Error::InsufficientData(_) => "insufficient-data",
            Error::Numeric(_) => "numeric",
            Error::Unsupported(_) => "unsupported",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
