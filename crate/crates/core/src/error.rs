use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("cannot compare element {0} with itself")]
    SelfComparison(u32),

    #[error("element {element} is outside 1..={n}")]
    OutOfRange { element: u32, n: usize },

    #[error("element {0} appears more than once")]
    Duplicate(u32),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("input of length {len} exceeds the oracle cap of {cap}")]
    OracleCapExceeded { len: usize, cap: usize },

    #[error("inconsistent input: {0}")]
    Inconsistent(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
