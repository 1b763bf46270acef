use std::fmt;

/// Errors produced anywhere in the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("argument outside domain: {0}")]
    Domain(String),
    #[error("evaluation failed: {0}")]
    Evaluation(Diagnostics),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("unsupported operator mode: {0}")]
    UnsupportedMode(String),
    #[error("ill-posed inversion: {0}")]
    IllPosed(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("serialization error: {0}")]
    Serialization(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Context attached to a failed evaluation.
#[derive(Debug, Clone)]
pub struct Diagnostics {
    pub what: String,
    pub detail: String,
}

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.what, self.detail)
    }
}

impl Error {
    pub(crate) fn eval(what: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Evaluation(Diagnostics { what: what.into(), detail: detail.into() })
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serialization(e.to_string())
    }
}
