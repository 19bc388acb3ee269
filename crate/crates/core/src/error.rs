use thiserror::Error;

use crate::graph::NodeId;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("node {0} out of range for graph with {1} nodes")]
    NodeOutOfRange(NodeId, usize),
    #[error("self-loop at node {0}")]
    SelfLoop(NodeId),
    #[error("edge {0} -> {1} closes a directed cycle")]
    Cycle(NodeId, NodeId),
    #[error("duplicate edge between {0} and {1}")]
    DuplicateEdge(NodeId, NodeId),
    #[error("query nodes must be distinct and outside the conditioning set")]
    InvalidQuery,
    #[error("conflicting orientations demanded for edge {0} - {1}")]
    Inconsistent(NodeId, NodeId),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Debug, Error)]
pub enum CiError {
    #[error("variable {0} out of range")]
    VariableOutOfRange(NodeId),
    #[error("insufficient samples: {n} rows for a conditioning set of size {k}")]
    InsufficientSamples { n: usize, k: usize },
    #[error("query nodes must be distinct and outside the conditioning set")]
    InvalidQuery,
}

#[derive(Debug, Error)]
pub enum DataError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Error)]
pub enum DiscoveryError {
    #[error(transparent)]
    Ci(#[from] CiError),
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

#[derive(Debug, Error)]
pub enum GenError {
    #[error("no instance with the requested identifiability after {0} draws")]
    RetryExhausted(usize),
    #[error("need at least three variables, got {0}")]
    TooFewVariables(usize),
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("true parent set is empty")]
    EmptyTruth,
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}
