//! Error types shared across the toolkit.

use thiserror::Error;

/// Errors produced by the core library.
#[derive(Debug, Error)]
pub enum CoreError {
    /// A configuration value violates an invariant (positivity, ranges, divisibility).
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    /// Array or image dimensions do not match what an operation requires.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// An operation received data it cannot work on (empty dataset, all-zero sinogram, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// PGM file does not start with the supported "P5" magic.
    #[error("unsupported image magic {found:?} (expected \"P5\")")]
    UnsupportedMagic { found: String },

    /// PGM header is syntactically broken or carries unsupported values.
    #[error("malformed image header: {0}")]
    MalformedHeader(String),

    /// File payload ends before the declared number of samples.
    #[error("truncated payload: expected {expected} bytes, got {got}")]
    TruncatedPayload { expected: usize, got: usize },

    /// Binary file magic/version is not one this reader understands.
    #[error("unknown format: {0}")]
    UnknownFormat(String),

    /// A numeric routine failed (non-finite values, degenerate normalization, ...).
    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, CoreError>;
