use std::io;

use thiserror::Error;

use crate::trace::NodeId;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A trace line that could not be parsed; `line` is 1-based.
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("no events")]
    EmptyTrace,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid synthetic parameters: {0}")]
    InvalidParams(String),

    /// Events handed to the window do not belong to the next interval.
    #[error("events carry interval {found} but the window expects {expected}")]
    IntervalMismatch { expected: u32, found: u32 },

    #[error("self contact on node {0}")]
    SelfContact(NodeId),

    #[error("node {node} out of range ({num_nodes} nodes)")]
    NodeOutOfRange { node: NodeId, num_nodes: u32 },

    #[error("node {0} already activated")]
    AlreadyActive(NodeId),

    #[error("insufficient support: need {needed} points, have {got}")]
    InsufficientSupport { needed: usize, got: usize },

    #[error("degenerate sample")]
    DegenerateSample,

    #[error("snapshot interval {interval} outside trace of {num_intervals} intervals")]
    SnapshotOutOfRange { interval: u32, num_intervals: u32 },

    #[error(transparent)]
    Io(#[from] io::Error),
}
