use thiserror::Error;

/// Errors raised by set construction, parsing and the search engines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} exceeds the in-memory limit of 2^20")]
    ModulusTooLarge(u64),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("residue {residue} is out of range for modulus {p}")]
    ResidueOutOfRange { residue: u64, p: u32 },
    #[error("operation requires a nonempty set")]
    EmptySet,
    #[error("difference must be a nonzero residue")]
    ZeroDifference,
    #[error("0 must not be a member")]
    ZeroMember,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("search budget exceeded: {0}")]
    Budget(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
