use std::path::PathBuf;

use serde_json::json;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] microcav_core::Error),
    #[error("{0}")]
    Invalid(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(_) | CliError::Invalid(_) => 2,
            CliError::Io { .. } => 3,
        }
    }

    /// Single-line JSON for standard error.
    pub fn to_json(&self) -> String {
        let (kind, module) = match self {
            CliError::Core(e) => ("validation", e.module()),
            CliError::Invalid(_) => ("validation", "cli"),
            CliError::Io { .. } => ("io", "cli"),
        };
        json!({ "error": { "kind": kind, "module": module, "message": self.to_string() } }).to_string()
    }
}

/// Lifts any module error into [`CliError`].
pub fn core<E: Into<microcav_core::Error>>(e: E) -> CliError {
    CliError::Core(e.into())
}
