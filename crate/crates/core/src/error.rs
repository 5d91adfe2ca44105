use std::path::PathBuf;

use thiserror::Error;

/// Errors produced while loading, configuring, generating or validating maps.
#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("{path}: {message}")]
    Load { path: PathBuf, message: String },

    #[error("piece `{piece}`: {message}")]
    InvalidPiece { piece: String, message: String },

    #[error("method registry: {0}")]
    Registry(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("no walkable surface in map")]
    NoWalkableSurface,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn piece(piece: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::InvalidPiece {
            piece: piece.into(),
            message: msg.into(),
        }
    }

    pub(crate) fn load(path: impl Into<PathBuf>, msg: impl Into<String>) -> Self {
        Error::Load {
            path: path.into(),
            message: msg.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
