use std::path::PathBuf;

use serde_json::json;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Core(#[from] qtanner::Error),

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, SimError>;

impl SimError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        SimError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            SimError::Core(e) => e.kind(),
            SimError::Io { .. } => "io",
            SimError::Config(_) => "invalid-config",
            SimError::Usage(_) => "usage",
        }
    }

    /// 2 for broken internal invariants, 1 for everything caused by input.
    pub fn exit_code(&self) -> i32 {
        match self {
            SimError::Core(e) if e.is_internal() => 2,
            _ => 1,
        }
    }

    /// One-line JSON object for the error stream.
    pub fn to_json(&self) -> String {
        json!({ "error": self.kind(), "message": self.to_string() }).to_string()
    }
}
