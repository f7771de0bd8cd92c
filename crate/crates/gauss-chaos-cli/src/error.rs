//! CLI error type. Everything that prevents a run maps into this and
//! exits with status 1; hypothesis violations are not errors and travel
//! through the report instead.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Msg(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },

    #[error(transparent)]
    Lib(#[from] gauss_chaos::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub fn msg(s: impl Into<String>) -> CliError {
    CliError::Msg(s.into())
}
