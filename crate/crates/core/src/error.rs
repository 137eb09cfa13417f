use thiserror::Error;

/// Errors raised by the core library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("illegal root system {label}{rank}: {constraint}")]
    IllegalType { label: char, rank: usize, constraint: &'static str },
    #[error("vector {0:?} is not a root of this system")]
    NotARoot(Vec<i64>),
    #[error("simple reflection index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("operands belong to different {what}: {left} vs {right}")]
    Mismatch { what: &'static str, left: String, right: String },
    #[error("enumeration of {what} needs {required} elements but the cap is {cap}")]
    CapExceeded { what: String, required: u128, cap: u128 },
    #[error("{0}")]
    Unsupported(String),
    #[error("parabolic subset must be proper (got all {0} generators)")]
    NotProper(usize),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("invalid modular symbol: {0}")]
    InvalidSymbol(String),
    #[error("cache file {path}: {reason}")]
    Cache { path: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Cache { path: String::new(), reason: e.to_string() }
    }
}
