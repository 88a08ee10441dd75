use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("group is not finite (free rank {0})")]
    NotFinite(usize),

    #[error("invalid group presentation: {0}")]
    InvalidGroup(String),

    #[error("{what} exceeds the limit of {limit}")]
    CapExceeded { what: String, limit: u64 },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("identity check failed: {0}")]
    InvariantViolation(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown export format `{0}`")]
    UnknownFormat(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
