use thiserror::Error;

/// Errors raised by parsing, analysis, and enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{line}:{column}: variable `{token}` found; ground programs only")]
    NonGround {
        line: usize,
        column: usize,
        token: String,
    },

    #[error("{what} exceeds the configured cap ({actual} > {limit})")]
    ResourceCap {
        what: &'static str,
        limit: u64,
        actual: u64,
    },

    #[error("interpretations are inconsistent on atom #{atom}")]
    Inconsistent { atom: usize },

    #[error("invalid interpretation: {0}")]
    InvalidInterp(String),

    #[error("width mismatch: expected {expected} atoms, found {found}")]
    Width { expected: usize, found: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("state set is empty")]
    EmptySet,

    #[error("unsupported combination: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn cap(what: &'static str, limit: impl TryInto<u64>, actual: impl TryInto<u64>) -> Self {
        Error::ResourceCap {
            what,
            limit: limit.try_into().unwrap_or(u64::MAX),
            actual: actual.try_into().unwrap_or(u64::MAX),
        }
    }

    pub(crate) fn check_width(expected: usize, found: usize) -> Result<()> {
        if expected == found {
            Ok(())
        } else {
            Err(Error::Width { expected, found })
        }
    }
}
