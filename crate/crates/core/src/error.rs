use thiserror::Error;

use crate::graph::{GraphError, Vertex};
use crate::meter::MeterError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Meter(#[from] MeterError),
    #[error("path does not exist between {s} and {t}")]
    NoPath { s: Vertex, t: Vertex },
    #[error("negative-weight cycle in the block containing {near}")]
    NegativeCycle { near: Vertex },
    #[error("negative-weight search over {vertices} vertices exceeds the exhaustive limit")]
    NegativeSearchTooLarge { vertices: usize },
    #[error("ball around {center} has {size} vertices, bound is {bound}")]
    BallBoundExceeded {
        center: Vertex,
        size: usize,
        bound: usize,
    },
    #[error("graph violates declared parameters: {0}")]
    ParamsViolation(String),
    #[error("internal invariant violated: {0}")]
    InvariantBreach(String),
    #[error("empty list")]
    EmptyList,
}
