use thiserror::Error;

/// Crate-wide error type. `Domain` covers precondition violations on
/// mathematical inputs, `Validation` covers malformed tuples and records,
/// `Resource` covers refusals to exceed configured budgets (memory, digits,
/// factoring effort). The distinction matters to the CLI, which maps
/// validation-class errors to exit code 1 and resource-class errors to 2.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }

    /// CLI exit code for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Resource(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
