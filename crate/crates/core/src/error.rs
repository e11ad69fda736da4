use thiserror::Error;

use crate::grid::{Configuration, Vertex};

/// Errors raised by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("illegal move: {0}")]
    IllegalMove(#[from] MoveViolation),

    #[error("classification error ({algorithm}): {reason}")]
    Classification {
        algorithm: &'static str,
        reason: String,
    },

    #[error("engine aborted at step {step} ({} configurations reached): {source}", prefix.len())]
    Aborted {
        step: usize,
        #[source]
        source: Box<Error>,
        /// Configurations `C_0..=C_step` reached before the abort.
        prefix: Vec<Configuration>,
    },

    #[error("capacity exceeded: {requested} symbols requested but {scheme} at k = {k} holds {capacity}")]
    Capacity {
        scheme: &'static str,
        k: usize,
        requested: usize,
        capacity: u128,
    },

    #[error("invalid distribution: {0}")]
    Distribution(String),

    #[error("explosion guard: at least {0} configurations, above the limit of {1}")]
    Explosion(usize, usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("decode error: {0}")]
    Decode(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn classify(algorithm: &'static str, reason: impl Into<String>) -> Self {
        Error::Classification {
            algorithm,
            reason: reason.into(),
        }
    }
}

/// The model constraint a rejected move violates.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveViolation {
    #[error("source {0} is not occupied")]
    SourceEmpty(Vertex),
    #[error("destination {0} is already occupied")]
    DestinationOccupied(Vertex),
    #[error("{0} -> {1} is not an edge of the host graph")]
    NotAnEdge(Vertex, Vertex),
    #[error("result disconnected")]
    Disconnected,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
