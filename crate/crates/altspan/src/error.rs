//! Crate-wide error type.

use std::path::PathBuf;

/// Errors surfaced by validation, parsing, and capped enumeration.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A structural precondition on a machine, grammar, graph, query, or
    /// configuration does not hold. The message names the offending part.
    #[error("validation: {0}")]
    Validation(String),

    /// A data file could not be read.
    #[error("io: {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A data file could not be parsed. The inner serde error reports line
    /// and column positions.
    #[error("parse: {path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    /// A data file parsed but declares an unknown or mismatched `format` tag.
    #[error("format: {path}: expected `{expected}`, found `{found}`")]
    Format {
        path: PathBuf,
        expected: String,
        found: String,
    },

    /// An enumeration exceeded its configured cap. The message names the cap
    /// so callers know which knob to raise.
    #[error("resource: {what} exceeded cap of {cap} units")]
    Resource { what: String, cap: usize },
}

impl Error {
    /// Shorthand for a [`Error::Validation`] with a formatted message.
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    /// Shorthand for a [`Error::Resource`] naming the exceeded cap.
    pub fn resource(what: impl Into<String>, cap: usize) -> Self {
        Error::Resource {
            what: what.into(),
            cap,
        }
    }
}
