use thiserror::Error;

/// Errors produced by the exact-distribution toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("negative entry {value} at index {index}; operator requires nonnegative input")]
    NegativeEntry { index: usize, value: String },

    #[error("exact comparison refused: {0} carries an inexact value")]
    Inexact(&'static str),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("distribution has unaccounted tail mass {0}; distribute it before taking a quantile")]
    TailMass(f64),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
