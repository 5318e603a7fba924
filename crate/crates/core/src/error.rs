use thiserror::Error;

use crate::graph::VertexId;

#[derive(Debug, Error)]
pub enum Error {
    #[error("exploration budget of {cap} vertices exceeded")]
    BudgetExceeded { cap: usize },
    #[error("vertex {0} does not exist in this instance")]
    InvalidVertex(VertexId),
    #[error("neighbor oracle is not symmetric at {0} -- {1}")]
    Asymmetric(VertexId, VertexId),
    #[error("canonicalization cap of {cap} vertices exceeded ({got})")]
    CanonCap { cap: usize, got: usize },
    #[error("edge cap of {cap} exceeded ({got} edges)")]
    EdgeCap { cap: usize, got: usize },
    #[error("set does not contain the root")]
    RootNotInSet,
    #[error("set is not connected")]
    Disconnected,
    #[error("set contains a cycle")]
    NotATree,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("retry cap of {0} reached without a successful sample")]
    RetryCap(usize),
    #[error("bracket [{lo}, {hi}] does not straddle the transition: {detail}")]
    Bracket { lo: f64, hi: f64, detail: String },
    #[error("radius mismatch: {0} vs {1}")]
    RadiusMismatch(usize, usize),
    #[error("no method can evaluate this set within its caps")]
    NoMethod,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
