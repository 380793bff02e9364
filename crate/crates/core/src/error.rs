use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Sample grids that cannot be combined or subdivided as requested.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("missing data: {0}")]
    MissingData(String),

    #[error("spectrum convention mismatch: {0}")]
    ConventionMismatch(String),

    #[error("order {order} outside the available range 0..={max}")]
    OrderOutOfRange { order: i64, max: i64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("config `{key}`: {message}")]
    Config { key: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn grid(msg: impl Into<String>) -> Self {
        Error::GridMismatch(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }

    pub(crate) fn config(key: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            message: msg.into(),
        }
    }
}
