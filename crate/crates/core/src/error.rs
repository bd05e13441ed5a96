use std::io;

use thiserror::Error;

/// Errors produced by graph loading, the solvers and the walk index.
#[derive(Debug, Error)]
pub enum PprError {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("graph is empty after removing isolated nodes")]
    EmptyGraph,

    #[error("invalid parameter `{name}`: {message}")]
    InvalidParameter { name: &'static str, message: String },

    #[error("node {node} out of range for graph with {n} nodes")]
    NodeOutOfRange { node: u64, n: usize },

    #[error("dense oracle limited to {limit} nodes, graph has {n}")]
    OracleTooLarge { n: usize, limit: usize },

    #[error("linear system is singular")]
    Singular,

    #[error("invalid {kind} file: {reason}")]
    Format { kind: &'static str, reason: String },

    #[error("walk index does not match query: {0}")]
    IndexMismatch(String),

    #[error("vector length mismatch: {left} vs {right}")]
    ShapeMismatch { left: usize, right: usize },

    #[error("unknown algorithm `{0}`")]
    UnknownAlgorithm(String),

    #[error("ground truth disagrees with dense oracle: l1 gap {gap:e}")]
    OracleMismatch { gap: f64 },
}

pub type Result<T> = std::result::Result<T, PprError>;

pub(crate) fn invalid(name: &'static str, message: impl Into<String>) -> PprError {
    PprError::InvalidParameter {
        name,
        message: message.into(),
    }
}
