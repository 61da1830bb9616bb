use thiserror::Error;

/// Errors raised by the computational kernels.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeckeError {
    /// An argument is outside the range accepted by the operation.
    #[error("invalid parameter: {0}")]
    Parameter(String),
    /// The input is well-formed but the operation is undefined on it.
    #[error("domain error: {0}")]
    Domain(String),
    /// Inversion of a matrix with zero determinant.
    #[error("matrix is singular")]
    Singular,
    /// A quantity exceeded the fixed-width range used by a kernel.
    #[error("overflow: {0}")]
    Overflow(String),
    /// Malformed textual or JSON input.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, HeckeError>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(HeckeError::Parameter(msg.into()))
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(HeckeError::Domain(msg.into()))
}
