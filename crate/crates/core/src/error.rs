use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("extension degree must be at least 1")]
    InvalidDegree,

    #[error("field of size {p}^{n} exceeds the 2^20 table guard")]
    FieldTooLarge { p: u64, n: u32 },

    #[error("field of size {target} is not an extension of the field of size {base}")]
    NotAnExtension { base: u64, target: u64 },

    #[error("elements belong to different fields")]
    FieldMismatch,

    #[error("inverse of zero")]
    ZeroInverse,

    #[error("degree {d} is below the required minimum {min}")]
    DegreeTooLow { d: u32, min: u32 },

    #[error("q = {0} is not a square")]
    NotSquare(u32),

    #[error("size guard: {0}")]
    SizeGuard(String),

    #[error("{0} is out of range")]
    OutOfRange(String),

    #[error("duplicate point at index {0}")]
    DuplicatePoint(usize),

    #[error("cannot choose {k} distinct points from a plane with {available}")]
    TooManyPoints { k: usize, available: usize },

    #[error("zero polynomial is not allowed here")]
    ZeroPolynomial,

    #[error("randomized step gave up after {0} attempts")]
    RetriesExhausted(u32),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for errors raised by a size guard, as opposed to bad input.
    pub fn is_size_guard(&self) -> bool {
        matches!(self, Error::SizeGuard(_) | Error::FieldTooLarge { .. })
    }
}
