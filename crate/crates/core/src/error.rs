use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum McgError {
    #[error("surface mismatch: {0} vs {1}")]
    SurfaceMismatch(String, String),
    #[error("generator {gen} is not in the catalog of {surface}")]
    UnknownGenerator { gen: String, surface: String },
    #[error("word is not liftable: {0}")]
    NotLiftable(String),
    #[error("word is not symmetric under the deck involution: {0}")]
    NotSymmetric(String),
    #[error("curve word is not simple: {0}")]
    NotSimple(String),
    #[error("word is not positive")]
    NotPositive,
    #[error("index {index} out of range for factorization of length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("{0}")]
    Invalid(String),
}
