use std::path::PathBuf;

/// Errors raised anywhere in the pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Invalid parameters, grids or sweep configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// The eigensolver did not reach its residual bound for a state.
    #[error("eigensolver failed to converge for state {index}: {reason}")]
    Convergence { index: usize, reason: String },

    /// Input violates an operation contract (e.g. an unnormalized state).
    #[error("contract violation: {0}")]
    Contract(String),

    /// A numerically impossible result beyond rounding (e.g. a negative variance).
    #[error("numeric error: {0}")]
    Numeric(String),

    /// Two objects that must share a grid do not.
    #[error("dimension mismatch: expected {expected}, got {found}")]
    Dimension { expected: usize, found: usize },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Malformed data or config file.
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
