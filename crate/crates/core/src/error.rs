use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid input: {0}")]
    Validation(String),

    /// A solver refused to run because a size or width limit would be exceeded.
    #[error("capacity exceeded: {what} is {actual}, limit {limit}")]
    Capacity {
        what: String,
        actual: usize,
        limit: usize,
    },

    /// A self-check inside a solver failed. Always a bug.
    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }

    pub(crate) fn capacity(what: impl Into<String>, actual: usize, limit: usize) -> Self {
        Error::Capacity {
            what: what.into(),
            actual,
            limit,
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::Validation(_) => 2,
            Error::Capacity { .. } => 3,
            Error::Io(_) => 4,
            Error::Internal(_) => 1,
        }
    }
}
