use std::io;

use thiserror::Error;

/// Errors produced anywhere in the learning pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed tabular input. `row` is 1-based and counts physical lines.
    #[error("format error at row {row}: {msg}")]
    Format { row: usize, msg: String },

    /// Malformed network or edge-list file. `line` is 1-based.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A caller passed arguments that violate an operation's preconditions.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// A graph violates a structural requirement (cycle, bad CPDAG, ...).
    #[error("structural error: {0}")]
    Structure(String),

    /// A configured resource budget was exceeded.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    /// An internal invariant was violated. Indicates a bug.
    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn arg<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}
