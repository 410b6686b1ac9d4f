use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different coefficient domains")]
    DomainMismatch,
    #[error("polynomial has {found} variable slots, expected {expected}")]
    SlotMismatch { expected: usize, found: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unsupported regime: {0}")]
    Unsupported(String),
    #[error("negative coefficient {value} at z^{degree} in {what}")]
    NegativeCoefficient {
        what: String,
        degree: usize,
        value: i64,
    },
    #[error("series division is not exact: {0}")]
    InexactDivision(String),
    #[error("degree cap {0} reached before the quotient vanished")]
    DegreeCapReached(usize),
    #[error("quotient has not vanished; partial series {partial:?}")]
    Incomplete { partial: Vec<u64> },
}

pub type Result<T> = std::result::Result<T, Error>;
