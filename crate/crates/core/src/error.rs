//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied value violates a documented precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// No connectivity-preserving rewiring move was found within the retry
    /// budget.
    #[error("rewiring failed: no connectivity-preserving move found in {attempts} attempts")]
    RewireExhausted { attempts: u32 },

    /// A simulation round could not be completed.
    #[error("round {round} failed: {source}")]
    RoundFailed {
        round: u32,
        #[source]
        source: Box<Error>,
    },

    /// A series file is syntactically invalid at the given 1-based line.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// True for errors caused by bad input rather than by a runtime failure.
    pub fn is_invalid_input(&self) -> bool {
        match self {
            Error::InvalidParameter(_) | Error::Parse { .. } => true,
            Error::RoundFailed { source, .. } => source.is_invalid_input(),
            _ => false,
        }
    }
}
