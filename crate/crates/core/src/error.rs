use thiserror::Error;

/// Errors raised by the geometry and estimation kernels.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("rank-deficient input: residual norm {residual:e} at column {column}")]
    RankDeficient { column: usize, residual: f64 },
    #[error("min-norm-point iteration did not converge after {iterations} iterations")]
    NonConvergence { iterations: usize },
    #[error("degenerate direction: projected axis has norm {norm:e}")]
    DegenerateDirection { norm: f64 },
    #[error("exact volumes are only available for j <= 2 (got j = {0})")]
    UnsupportedMode(usize),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid body: {0}")]
    InvalidBody(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
