//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("valuation of zero is infinite")]
    InfiniteValuation,
    #[error("not a cube: {0}")]
    NotACube(String),
    #[error("cannot factor zero")]
    FactorZero,
    #[error("{0} is not a quadratic residue modulo {1}")]
    NonResidue(String, String),
    #[error("moduli are not pairwise coprime")]
    CrtNotCoprime,
    #[error("{0} is not invertible modulo {1}")]
    NotInvertible(String, String),
    #[error("degenerate Mestre input: {0}")]
    Degenerate(String),
    #[error("fixture is corrupt: {0}")]
    CorruptFixture(String),
    #[error("unknown fixture label {0:?}")]
    UnknownFixture(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("bad prime {0}: {1}")]
    BadPrime(u64, String),
    #[error("search exhausted: {0}")]
    Exhausted(String),
    #[error("discriminant mismatch: {0} vs {1}")]
    DiscriminantMismatch(String, String),
    #[error("hypothesis failed: {0}")]
    Hypothesis(String),
    #[error("I/O error: {0}")]
    Io(String),
    #[error("over budget: {0}")]
    Budget(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
