use thiserror::Error;

/// Errors raised by the library.
///
/// `Usage` covers malformed or mismatched inputs; `Domain` covers inputs that
/// are well formed but outside an operation's mathematical precondition.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("power must lie in 1..=30, got {0}")]
    InvalidPower(u32),
    #[error("power mismatch: 2^{0} vs 2^{1}")]
    PowerMismatch(u32, u32),
    #[error("genus mismatch: {0} vs {1}")]
    GenusMismatch(usize, usize),
    #[error("coordinate vector has odd length {0}")]
    OddLength(usize),
    #[error("{0} is not a unit modulo 2^{1}")]
    NotUnit(u32, u32),
    #[error("vector is not primitive")]
    NotPrimitive,
    #[error("duplicate element at index {0}")]
    Duplicate(usize),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("enumeration needs {required} vectors, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
