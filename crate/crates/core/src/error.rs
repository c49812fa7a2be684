use thiserror::Error;

/// Errors raised by polynomial arithmetic and the invariant-theory constructions built on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime below 2^31")]
    InvalidPrime(u64),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("exponent overflow")]
    Overflow,

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("dividend is not divisible by the divisor")]
    NotDivisible,

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("size bound exceeded: {needed} > {bound}")]
    BoundExceeded { needed: u128, bound: u128 },

    #[error("resource budget exceeded: {0}")]
    Budget(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
