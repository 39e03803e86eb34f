use thiserror::Error;

/// Errors raised anywhere in the laboratory.
///
/// The variants are grouped by how a caller is expected to react: bad
/// input, a resource guard, a failed mathematical assertion, or a bug.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    #[error("guard exceeded: {what} needs {needed}, limit is {limit}")]
    GuardExceeded {
        what: String,
        needed: u128,
        limit: u128,
    },

    #[error("not invertible: {0}")]
    NotInvertible(String),

    #[error("precision too low: {0}")]
    PrecisionTooLow(String),

    #[error("residue equation unsolvable over F_{field_order}: {detail}")]
    ResidueUnsolvable { field_order: u64, detail: String },

    #[error("root lift failed: {0}")]
    LiftFailed(String),

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("cache i/o: {0}")]
    Io(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub(crate) fn guard(what: &str, needed: u128, limit: u128) -> Result<()> {
    if needed > limit {
        Err(Error::GuardExceeded {
            what: what.to_string(),
            needed,
            limit,
        })
    } else {
        Ok(())
    }
}
