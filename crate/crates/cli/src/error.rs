//! CLI-side error taxonomy: JSON syntax, schema violations, physics value
//! errors surfaced from the core, and I/O.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed JSON text.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    /// Well-formed JSON that does not fit the strict config schema
    /// (unknown keys included; the message names the offender).
    #[error("schema error: {0}")]
    Schema(String),

    /// Structurally valid config with out-of-range physics.
    #[error("value error: {0}")]
    Value(#[from] phnet::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    /// Nothing to plot.
    #[error("no data to plot")]
    EmptyData,
}
