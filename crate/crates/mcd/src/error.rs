//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum McdError {
    /// A malformed line in a text input (log, edge list, weights, params).
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// An input violated a semantic precondition (unknown action, empty
    /// delay set, nonpositive weight, ...).
    #[error("{0}")]
    Domain(String),

    /// An impossible or inconsistent configuration value.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// Exhaustive enumeration would exceed the caller-supplied limit.
    #[error("enumeration of {subsets} subsets exceeds limit {limit}")]
    EnumerationLimit { subsets: u128, limit: u64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl McdError {
    pub fn parse(line: usize, message: impl Into<String>) -> Self {
        McdError::Parse {
            line,
            message: message.into(),
        }
    }

    pub fn domain(message: impl Into<String>) -> Self {
        McdError::Domain(message.into())
    }

    pub fn config(message: impl Into<String>) -> Self {
        McdError::Config(message.into())
    }
}

pub type Result<T> = std::result::Result<T, McdError>;
