use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus 0x{0:X} is not irreducible over GF(2)")]
    ReducibleModulus(u64),
    #[error("modulus 0x{modulus:X} has degree {actual}, expected {expected}")]
    DegreeMismatch {
        modulus: u64,
        expected: u32,
        actual: u32,
    },
    #[error("unsupported extension degree {0}; supported range is 1..=32")]
    UnsupportedDegree(u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("GF(2^{m}) is not a subfield of GF(2^{n})")]
    NotASubfield { m: u32, n: u32 },
    #[error("element 0x{bits:X} does not fit in GF(2^{n})")]
    ElementOutOfRange { bits: u64, n: u32 },
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
