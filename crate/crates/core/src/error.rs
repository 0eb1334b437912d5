//! Error type shared across the library.
//!
//! Every fallible operation returns [`Error`]. The CLI maps error classes to
//! exit codes: validation failures exit 2, numeric failures 3, resource-cap
//! refusals 4 (0 is success).

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter or input failed validation (bad range, malformed file, ...).
    #[error("validation: {0}")]
    Validation(String),
    /// A numeric routine failed: divergent quadrature, non-finite value,
    /// singular system, non-integrable parameter combination.
    #[error("numeric: {0}")]
    Numeric(String),
    /// The operation would exceed a hard resource cap and was refused.
    #[error("resource cap: {0}")]
    Resource(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }

    pub fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }

    /// Process exit code for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation(_) | Error::Io(_) => 2,
            Error::Numeric(_) => 3,
            Error::Resource(_) => 4,
        }
    }
}

/// Checks that `x` is finite and strictly positive, for parameter validation.
pub(crate) fn require_pos(x: f64, name: &str) -> Result<f64> {
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(Error::validation(format!("{name} must be finite and > 0, got {x}")))
    }
}

/// Checks that `x` is finite, for parameter validation.
pub(crate) fn require_finite(x: f64, name: &str) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::validation(format!("{name} must be finite, got {x}")))
    }
}
