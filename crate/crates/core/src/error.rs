use std::fmt;
use std::io;

/// Errors produced by the library.
#[derive(Debug)]
pub enum Error {
    /// A constructor or function argument failed validation.
    InvalidParameter(String),
    /// The operation is not defined for this distribution family.
    Unsupported(String),
    /// The revenue curve is unbounded near q = 0, so no optimal price exists.
    NoFiniteOptimum,
    /// An operation that requires a regular distribution received an
    /// irregular one.
    NotRegular,
    /// A computed quantity failed an internal consistency check.
    Numeric(String),
    /// Reading an input file failed.
    Io(io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::Unsupported(msg) => write!(f, "unsupported operation: {msg}"),
            Error::NoFiniteOptimum => {
                write!(f, "revenue is unbounded near q = 0; no finite optimum")
            }
            Error::NotRegular => write!(f, "distribution is not regular"),
            Error::Numeric(msg) => write!(f, "numerical failure: {msg}"),
            Error::Io(err) => write!(f, "io error: {err}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(err) => Some(err),
            _ => None,
        }
    }
}

impl From<io::Error> for Error {
    fn from(err: io::Error) -> Self {
        Error::Io(err)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
