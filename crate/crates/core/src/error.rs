use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the simulation toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("rectangle {h}x{w} at ({top}, {left}) exceeds grid of {height}x{width}")]
    Bounds {
        top: usize,
        left: usize,
        h: usize,
        w: usize,
        height: usize,
        width: usize,
    },

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("structure error: {0}")]
    Structure(String),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("invalid facies code {code} (grid holds {num_facies} facies)")]
    FaciesCode { code: u32, num_facies: u32 },

    #[error("invalid hard data: {0}")]
    HardData(String),

    #[error("config error: {key}: {message}")]
    Config { key: String, message: String },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("degenerate ensemble: {0}")]
    Degenerate(String),

    #[error("internal sequencing error: {0}")]
    Sequencing(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
