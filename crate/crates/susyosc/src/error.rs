//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A numeric argument is outside its documented domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A transformation spec cannot support the requested operation
    /// (e.g. odd-p U family, whose partner potential has poles on the
    /// half-line).
    #[error("invalid transformation spec: {0}")]
    InvalidSpec(String),

    /// Quadrature failed to reach the requested tolerance within the
    /// node budget. Carries the best value and the achieved error bound.
    #[error("quadrature did not converge: achieved error {achieved:.3e} > requested {requested:.3e}")]
    NonConvergence {
        value: f64,
        achieved: f64,
        requested: f64,
    },

    /// Two coefficient vectors or superstates have incompatible
    /// truncations.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
