use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed or mathematically invalid input.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// Input outside the supported computational range (field size cap, genus, q).
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// A model that should be nonsingular is singular.
    #[error("singular model: {0}")]
    Singular(String),
    /// An exact result that must be an integer is not.
    #[error("integrality failure: {0}")]
    NonIntegral(String),
    /// Ensemble cache file problems.
    #[error("cache: {0}")]
    Cache(String),
    /// An internal consistency check failed.
    #[error("internal: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
