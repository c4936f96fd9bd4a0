use std::path::PathBuf;

use thiserror::Error;

/// Errors surfaced by the command line, each with a fixed exit code.
#[derive(Debug, Error)]
pub enum BenchError {
    #[error("schema error in `{field}`: {message}")]
    Schema { field: String, message: String },
    #[error("invalid JSON at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("planner {planner} failed: {reason}")]
    PlannerFailed { planner: String, reason: String },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl BenchError {
    pub fn from_json(e: serde_json::Error) -> Self {
        BenchError::Json { line: e.line(), column: e.column(), message: e.to_string() }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        BenchError::Io { path: path.into(), source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Schema { .. } | BenchError::Json { .. } => 2,
            BenchError::PlannerFailed { .. } => 3,
            BenchError::Io { .. } => 1,
        }
    }
}
