use thiserror::Error;

use crate::orient::{EdgeClass, EdgeId, VertexId};

/// Errors raised by the orientation state. Apart from `Config`, these signal
/// a logic bug in the caller rather than a recoverable condition.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrientError {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("vertex {vertex} has no free {class:?} slot")]
    SlotOccupied { vertex: VertexId, class: EdgeClass },

    #[error("vertex {0} out of range")]
    VertexOutOfRange(VertexId),

    #[error("edge {0} is unknown or already removed")]
    DeadEdge(EdgeId),

    #[error("self-loop at vertex {0} is not a forest edge")]
    SelfLoop(VertexId),

    #[error("owner {owner} is not an endpoint of ({u}, {v})")]
    NotAnEndpoint {
        owner: VertexId,
        u: VertexId,
        v: VertexId,
    },

    #[error("path is not a directed chain of primary edges: {0}")]
    BrokenPath(String),

    #[error("vertices {0} and {1} are already connected")]
    SameComponent(VertexId, VertexId),
}
