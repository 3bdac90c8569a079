use thiserror::Error;

/// Input errors; every variant maps to exit code 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("invalid model at {path}: {message}")]
    Schema { path: String, message: String },

    #[error("{0}")]
    Core(#[from] lrkit::Error),

    #[error("{0}")]
    Usage(String),
}
