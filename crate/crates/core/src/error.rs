//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by geometry construction, channel assembly, precoding and
/// the sweep harness.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument violated a documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A special-function argument outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Matrix operands with incompatible dimensions.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// A linear-algebra step failed (singular system, rank deficiency, ...).
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A configuration the model deliberately rejects rather than guesses at.
    #[error("unsupported configuration: {0}")]
    UnsupportedConfiguration(String),

    /// Malformed experiment configuration (file or key/value).
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
