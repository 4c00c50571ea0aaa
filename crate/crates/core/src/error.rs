use thiserror::Error;

use crate::verifier::ViolationWitness;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("inversion of zero")]
    DivisionByZero,

    #[error("element encoding {value} out of range for a field of order {order}")]
    EncodingOutOfRange { value: u64, order: u64 },

    #[error("zero vector does not define a projective point")]
    ZeroVector,

    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),

    #[error("budget exceeded: {what} needs {needed} > budget {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        budget: u128,
    },

    #[error("precondition failed: {reason}")]
    Precondition {
        reason: String,
        witness: Option<Box<ViolationWitness>>,
    },

    #[error("rejection sampling gave up after {0} attempts")]
    RejectionCapExceeded(u64),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
