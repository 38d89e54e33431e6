use std::io;

use thiserror::Error;

/// Errors raised while loading inputs, configuring, or running a simulation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: self-loop on node `{label}`")]
    SelfLoop { line: usize, label: String },

    #[error("line {line}: duplicate edge `{source_label}` -> `{target_label}`")]
    DuplicateEdge {
        line: usize,
        source_label: String,
        target_label: String,
    },

    #[error("line {line}: edge weight {weight} outside [0, 1]")]
    WeightOutOfRange { line: usize, weight: f64 },

    #[error("line {line}: unknown node label `{label}`")]
    UnknownNode { line: usize, label: String },

    #[error("line {line}: topic {topic} out of range (topic count {topic_count})")]
    TopicOutOfRange {
        line: usize,
        topic: usize,
        topic_count: usize,
    },

    #[error("line {line}: attitude `{value}` is not one of -1, 0, 0.5, 1")]
    OffLattice { line: usize, value: String },

    #[error("node {node} out of range (node count {node_count})")]
    NodeOutOfRange { node: usize, node_count: usize },

    #[error("infeasible shape: {0}")]
    InfeasibleShape(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("AUC undefined: labels contain only {0}")]
    DegenerateLabels(&'static str),

    #[error("missing truth row for node `{label}` on topic {topic}")]
    MissingTruth { label: String, topic: usize },

    #[error("manifest mismatch: {0}")]
    Manifest(String),

    #[error("internal assertion failed: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    /// True for failures that indicate a bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
