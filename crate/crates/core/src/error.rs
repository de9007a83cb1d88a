use thiserror::Error;

/// Errors raised by the library. The CLI maps [`Error::Parse`] to exit code 2
/// and every other variant to exit code 3.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field size {p}^{k} exceeds 2^16")]
    FieldTooLarge { p: u64, k: u32 },
    #[error("zero has no inverse")]
    InverseOfZero,
    #[error("operands belong to different fields ({0} vs {1})")]
    MixedFields(String, String),
    #[error("element index {0} out of range for field of size {1}")]
    BadElement(u64, u32),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("polynomial must be monic and nonzero")]
    NotMonic,
    #[error("modulus must be squarefree")]
    NotSquarefree,
    #[error("residue is not invertible modulo the modulus")]
    NotInvertible,
    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("size guard exceeded: {0}")]
    TooLarge(String),
    #[error("non-integral result where an integer was required: {0}")]
    NonIntegral(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
