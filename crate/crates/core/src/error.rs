use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// A scalar argument lies outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Raster shapes are incompatible with the requested operation.
    #[error("dimension error: {0}")]
    Dimension(String),

    /// Input data violates a value invariant (non-finite, negative, ...).
    #[error("data error: {0}")]
    Data(String),

    /// The operation has no well-defined result for the input, e.g. a metric
    /// over zero valid pixels.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// A scene description cannot be generated within the rig's depth range.
    #[error("scene error: {0}")]
    Scene(String),

    /// Malformed or unsupported file contents.
    #[error("format error at byte {offset}: {message}")]
    Format { offset: usize, message: String },

    /// Configuration text could not be parsed or failed validation.
    #[error("config error: {0}")]
    Config(String),

    /// A dataset manifest entry could not be loaded.
    #[error("manifest entry {index}: {message}")]
    Manifest { index: usize, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn format(offset: usize, message: impl Into<String>) -> Self {
        Error::Format {
            offset,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
