use thiserror::Error;

use crate::codec::FrameError;

/// Errors produced anywhere in the compression and simulation pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// The normal-equation matrix of a least-squares solve is numerically singular.
    #[error("rank-deficient system (condition estimate {condition:e})")]
    RankDeficient { condition: f64 },

    #[error("malformed frame: {0}")]
    Frame(#[from] FrameError),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidConfig(msg.into())
}

pub(crate) fn degenerate(msg: impl Into<String>) -> Error {
    Error::DegenerateInput(msg.into())
}
