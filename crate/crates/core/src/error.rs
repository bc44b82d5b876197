use thiserror::Error;

/// Errors raised by the library layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// Two inputs that must agree in length or dimension do not.
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    /// The requested enumeration would exceed the supported size.
    #[error("capacity error: {0}")]
    Capacity(String),
    /// An iterative method failed to converge.
    #[error("numeric error: {0}")]
    Numeric(String),
    /// Input data make the statistic undefined (e.g. zero variance).
    #[error("degenerate input: {0}")]
    Degenerate(String),
    /// Closed form exists only for a subset of exponents.
    #[error("unsupported exponent p = {0}")]
    UnsupportedExponent(f64),
    /// Result does not fit in the scalar type; use the log-space variant.
    #[error("overflow: {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn check_len(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, actual })
    }
}
