use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument was outside the operation's domain (non-finite, negative, empty, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    /// A desk-scale resource guard refused the request.
    #[error("guard `{guard}` violated: {detail}")]
    Guard { guard: &'static str, detail: String },

    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn guard(guard: &'static str, detail: impl Into<String>) -> Self {
        Error::Guard {
            guard,
            detail: detail.into(),
        }
    }

    /// Name of the violated guard, if this is a guard error.
    pub fn guard_name(&self) -> Option<&'static str> {
        match self {
            Error::Guard { guard, .. } => Some(guard),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} must be finite, got {v}")))
    }
}
