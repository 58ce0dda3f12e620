//! Local link management.
//!
//! Each node owns a directed neighbor table capped by a desired degree that
//! the node samples once, at its first appearance, from a truncated
//! power-law distribution. Per interval a node drops neighbors it has not
//! met within the window, links to eligible newcomers while below its cap,
//! and, when full, replaces a weakest neighbor with probability `omega`.

mod degree;
mod engine;

use serde::{Deserialize, Serialize};

pub use degree::{degree_pmf, DegreeSampler};
pub use engine::{CandidateOutcome, IntervalStats, NodeState, OverlayEngine, Replacement};

use crate::error::{Error, Result};
use crate::trace::NodeId;

/// Parameters of the link-management algorithm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlayConfig {
    /// Sliding-window length in trace intervals.
    pub delta: u32,
    /// Minimum in-window contact intervals before a peer is link-eligible.
    pub c_min: u32,
    /// Probability that a full node replaces a neighbor for a new candidate.
    pub omega: f64,
    /// Magnitude of the power-law exponent of the desired-degree
    /// distribution; the pmf is proportional to `d^-lambda`.
    pub lambda: f64,
    pub d_min: u32,
    pub d_max: u32,
}

impl Default for OverlayConfig {
    fn default() -> Self {
        Self {
            delta: 5,
            c_min: 1,
            omega: 0.25,
            lambda: 2.5,
            d_min: 5,
            d_max: 100,
        }
    }
}

impl OverlayConfig {
    /// Checks invariants; returns human-readable warnings for legal but
    /// unusual settings.
    pub fn validate(&self) -> Result<Vec<String>> {
        if self.delta == 0 {
            return Err(Error::InvalidConfig("delta must be >= 1".into()));
        }
        if self.c_min == 0 {
            return Err(Error::InvalidConfig("c_min must be >= 1".into()));
        }
        if !(0.0..=1.0).contains(&self.omega) || !self.omega.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "omega out of [0,1]: {}",
                self.omega
            )));
        }
        if !(self.lambda > 0.0) || !self.lambda.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "lambda must be a positive real, got {}",
                self.lambda
            )));
        }
        if self.d_min == 0 {
            return Err(Error::InvalidConfig("d_min must be >= 1".into()));
        }
        if self.d_min > self.d_max {
            return Err(Error::InvalidConfig(format!(
                "d_min {} > d_max {}",
                self.d_min, self.d_max
            )));
        }
        let mut warnings = Vec::new();
        if !(2.0..=3.0).contains(&self.lambda) {
            warnings.push(format!(
                "lambda = {} outside the recommended range [2, 3]",
                self.lambda
            ));
        }
        Ok(warnings)
    }
}

/// A directed neighbor-table entry as captured in a snapshot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnapshotEdge {
    pub src: NodeId,
    pub dst: NodeId,
    pub established_at: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnapshotNode {
    pub id: NodeId,
    pub desired_degree: u32,
    pub out_degree: u32,
}

/// Immutable view of the overlay after some interval: every neighbor-table
/// entry as a directed edge, plus the desired degree of every node that has
/// appeared in the trace so far.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlaySnapshot {
    pub interval: u32,
    /// Active nodes, ascending by id.
    pub nodes: Vec<SnapshotNode>,
    /// Directed edges sorted by `(src, dst)`.
    pub edges: Vec<SnapshotEdge>,
}

impl OverlaySnapshot {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
}
