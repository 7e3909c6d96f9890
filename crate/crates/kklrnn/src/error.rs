//! Error type shared across the toolkit.
//!
//! Programming errors (shape mismatches on the tape, out-of-range slices)
//! panic with a message naming the offending operation. Everything driven
//! by user input — config files, CSV data, numerical blow-ups during
//! training — flows through [`Error`] so the CLI can map it to an exit code.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid configuration: unknown keys, inconsistent dimensions,
    /// family/option combinations that cannot be built.
    #[error("config error: {0}")]
    Config(String),

    /// Invalid or missing input data (CSV files, masks, window bounds).
    #[error("data error: {0}")]
    Data(String),

    /// Training or integration produced a non-finite value.
    #[error("numerical failure at step {step}: {msg}")]
    Numerical { step: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn data(msg: impl Into<String>) -> Self {
        Error::Data(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
