use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("scalar has no multiplicative inverse (zero)")]
    InvalidScalar,

    #[error("decode error: {0}")]
    Decode(String),

    #[error("honest majority violated: 2m < p required, got p={parties}, m={corrupt}")]
    MajorityViolation { parties: usize, corrupt: usize },

    #[error("shares do not cover subset component {0}")]
    IncompleteShares(usize),

    #[error("replicated copies of subset component {0} disagree")]
    InconsistentShares(usize),

    #[error("parameter mismatch: {0}")]
    ParameterMismatch(String),

    #[error("input {value} outside domain [{low}, {high})")]
    Domain { value: i64, low: i64, high: i64 },

    #[error("value {value} outside encodable range (bound {bound})")]
    Range { value: u64, bound: u64 },

    #[error("discrete logarithm not found below bound {0}")]
    OutOfRange(u64),

    #[error("no curve point found for value {0} within the padding counter space")]
    EncodingFailure(u64),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("internal consistency check failed: {0}")]
    SelfCheck(String),
}

impl Error {
    pub(crate) fn decode(msg: impl Into<String>) -> Self {
        Error::Decode(msg.into())
    }

    pub(crate) fn mismatch(msg: impl Into<String>) -> Self {
        Error::ParameterMismatch(msg.into())
    }

    pub(crate) fn domain(value: i64, low: i64, high: i64) -> Self {
        Error::Domain { value, low, high }
    }
}
