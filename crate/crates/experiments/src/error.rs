use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExpError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] intvol::Error),
}

pub type ExpResult<T> = Result<T, ExpError>;

impl ExpError {
    pub fn config(msg: impl Into<String>) -> Self {
        ExpError::Config(msg.into())
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        ExpError::Io { path: path.display().to_string(), source }
    }

    /// Process exit status: 3 for bad input, 4 for I/O, 1 for numerical failure.
    pub fn exit_code(&self) -> i32 {
        use intvol::Error as E;
        match self {
            ExpError::Config(_) => 3,
            ExpError::Io { .. } => 4,
            ExpError::Core(E::Io { .. }) => 4,
            ExpError::Core(
                E::Domain(_) | E::DimensionMismatch { .. } | E::UnsupportedMode(_) | E::Parse { .. } | E::InvalidBody(_),
            ) => 3,
            ExpError::Core(_) => 1,
        }
    }
}

impl From<csv::Error> for ExpError {
    fn from(e: csv::Error) -> Self {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => ExpError::Io { path: "<csv>".into(), source: io },
            other => ExpError::Config(format!("csv: {other:?}")),
        }
    }
}
