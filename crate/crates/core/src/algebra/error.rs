use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("field F_{{{p}^{s}}} exceeds the size cap {cap}")]
    CapExceeded { p: u32, s: u32, cap: u64 },
    #[error("zero polynomial has no factorization")]
    ZeroPolynomial,
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("not a place: {0}")]
    NotAPlace(String),
}
