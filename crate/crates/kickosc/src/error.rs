//! Runner error type and its exit-code mapping.

use std::path::PathBuf;

use thiserror::Error;

/// Failures surfaced by the runner, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum RunError {
    /// The config file could not be read.
    #[error("cannot read config {path}: {source}")]
    ReadConfig {
        /// Offending path.
        path: PathBuf,
        /// Underlying IO error.
        source: std::io::Error,
    },
    /// The config failed to parse or validate.
    #[error("invalid config:\n  {}", .0.join("\n  "))]
    Config(Vec<String>),
    /// Output files could not be written.
    #[error("cannot write {path}: {source}")]
    Output {
        /// Offending path.
        path: PathBuf,
        /// Underlying error.
        source: std::io::Error,
    },
    /// The simulation stopped on a kernel error or an invariant check failed.
    #[error("run failed: {0}")]
    Runtime(String),
}

impl RunError {
    /// Exit code: 1 for config problems, 2 for everything that happens after
    /// the config was accepted.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::ReadConfig { .. } | RunError::Config(_) => 1,
            RunError::Output { .. } | RunError::Runtime(_) => 2,
        }
    }
}
