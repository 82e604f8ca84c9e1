use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the simulator and its optimizers.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument fell outside the mathematical domain of a formula.
    #[error("domain error: {0}")]
    Domain(String),

    /// A scenario or CLI configuration value violates a constraint.
    #[error("configuration error for `{key}`: {message}")]
    Config { key: String, message: String },

    /// A combined channel is (numerically) zero, so no beam direction exists.
    #[error("degenerate channel: {0}")]
    DegenerateChannel(String),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    /// The null-space projector annihilates the vector it should keep.
    #[error("projector degenerate: {0}")]
    ProjectorDegenerate(String),

    #[error("I/O error on {path}: {source}")]
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

    /// True for errors caused by user input rather than numerics or I/O.
    pub fn is_config(&self) -> bool {
        matches!(self, Error::Config { .. } | Error::Unsupported(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
