use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime modulus in [3, 2^31)")]
    NotPrime(u64),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("element {0} appears twice in the power table; its order is below {1}")]
    DuplicateLog(u64, u64),
    #[error("transposed Vandermonde system is singular (repeated node)")]
    Singular,
    #[error("window is not the evaluation of a sparse polynomial: {0}")]
    NotACodeword(String),
    #[error("polynomial cannot be encoded: {0}")]
    NotEncodable(String),
    #[error("no strict majority among block generators")]
    Ambiguous,
    #[error("generator has zero constant term, cannot run the recurrence backwards")]
    DegenerateGenerator,
    #[error("no unique decoding: {0} candidates within the sieve radius")]
    NoUniqueDecode(usize),
    #[error("malformed input: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
