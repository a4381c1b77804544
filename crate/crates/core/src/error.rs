use alloc::string::String;

/// Errors raised by the core algorithms.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("node {node} is out of range for a graph with {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },

    #[error("graph is empty after removing self-loops, duplicate edges and isolated nodes")]
    EmptyGraph,

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("partition does not match graph: {0}")]
    PartitionMismatch(String),

    #[error("node {0} is alone in its community; the move is undefined")]
    SingletonMove(usize),

    #[error("graph is disconnected ({components} components); {feature} needs a connected graph or per-component mode")]
    Disconnected {
        feature: &'static str,
        components: usize,
    },

    #[error("infeasible generator parameters: {0}")]
    Infeasible(String),

    #[error("{what} did not converge within {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },

    #[error("empty candidate list")]
    NoCandidates,
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
