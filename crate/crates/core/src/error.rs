use std::path::PathBuf;

/// Errors raised by the library. The CLI maps each kind onto its own exit code.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("ingestion error in {source_name}: {message}")]
    Ingestion {
        source_name: String,
        message: String,
    },

    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A caller violated an operation's precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("capacity exceeded: {what} is {actual}, limit is {limit}")]
    Capacity {
        what: &'static str,
        actual: usize,
        limit: usize,
    },

    /// Raised by the brute-force finest-partition search when two incomparable
    /// minimal matching partitions exist.
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn capacity(what: &'static str, actual: usize, limit: usize) -> Self {
        Error::Capacity {
            what,
            actual,
            limit,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
