use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{q} exceeds the discrete-log table limit {limit}")]
    LimitExceeded { q: u64, limit: u64 },

    #[error("operation undefined at the zero element")]
    ZeroElement,

    #[error("{divisor} does not divide {value}")]
    NotADivisor { divisor: u64, value: u64 },

    #[error("polynomial hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("sieve deficiency is not positive")]
    NonPositiveDelta,

    #[error("arithmetic overflow in {0}")]
    Overflow(String),

    #[error("internal consistency failure: {0}")]
    Inconsistent(String),

    #[error("corrupted checkpoint {path} at line {line}: {reason}")]
    CorruptCheckpoint {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
