use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("corpus line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error(transparent)]
    Core(#[from] ciprobe_core::Error),

    /// A proved theorem appears violated: an implementation bug.
    #[error("theorem violation signal: {0}")]
    TheoremViolation(String),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("{0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, HarnessError>;
