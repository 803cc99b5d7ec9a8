use thiserror::Error;

use crate::circulant::Vertex;

#[derive(Debug, Error)]
pub enum Error {
    #[error("order must be at least 2, got {0}")]
    InvalidOrder(usize),
    #[error("vertex {vertex} is outside 1..={n}")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("an edge needs two distinct endpoints, got {0} twice")]
    Loop(Vertex),
    #[error("a path needs at least two vertices, got {0}")]
    PathTooShort(usize),
    #[error("vertex {0} repeats in path")]
    RepeatedVertex(Vertex),
    #[error("path {index} lives on K_{found}, family is on K_{expected}")]
    FamilyOrderMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("odd order required, got {0}")]
    NeedOddOrder(usize),
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("edge type {etype} is outside 1..={max}")]
    TypeOutOfRange { etype: usize, max: usize },
    #[error("method {method} does not apply to n = {n}: {reason}")]
    Inapplicable {
        method: &'static str,
        n: usize,
        reason: String,
    },
    #[error("construction invariant broken: {0}")]
    Construction(String),
    #[error("search budget exhausted after {nodes} nodes")]
    BudgetExceeded { nodes: u64 },
    #[error("family file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
