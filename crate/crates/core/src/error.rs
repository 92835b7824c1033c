use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{a} is not invertible modulo {n}")]
    NotInvertible { a: i64, n: u64 },

    #[error("moduli {0} and {1} are not coprime")]
    NonCoprimeModuli(u64, u64),

    #[error("{value} has {count} divisors, more than the cap of {cap}")]
    TooManyDivisors { value: u64, count: u64, cap: u64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid bump function: {0}")]
    InvalidBump(String),

    #[error("degenerate fit: {usable} usable points, need at least 3")]
    DegenerateFit { usable: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}
