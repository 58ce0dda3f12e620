//! Per-interval execution of the link-management algorithm.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{DegreeSampler, OverlayConfig, OverlaySnapshot, SnapshotEdge, SnapshotNode};
use crate::error::{Error, Result};
use crate::sampling::node_seed;
use crate::trace::{ContactEvent, NodeId};
use crate::window::{ContactWindow, WindowParams};

/// A node that has appeared in the trace.
///
/// Randomness is private per node (stream seeded from the run seed and the
/// node id), so a node's decisions do not depend on the order nodes are
/// visited within an interval.
#[derive(Debug, Clone)]
pub struct NodeState {
    desired_degree: u32,
    activated_at: u32,
    table: HashMap<NodeId, u32>,
    rng: ChaCha8Rng,
}

impl NodeState {
    pub fn desired_degree(&self) -> u32 {
        self.desired_degree
    }

    pub fn activated_at(&self) -> u32 {
        self.activated_at
    }

    pub fn out_degree(&self) -> u32 {
        self.table.len() as u32
    }

    /// Interval the entry for `peer` was created, if present.
    pub fn established_at(&self, peer: NodeId) -> Option<u32> {
        self.table.get(&peer).copied()
    }

    pub fn is_neighbor(&self, peer: NodeId) -> bool {
        self.table.contains_key(&peer)
    }

    /// Neighbors in unspecified order.
    pub fn neighbors(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.table.keys().copied()
    }
}

/// One node replacing a weakest neighbor with a new candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Replacement {
    pub added: NodeId,
    pub evicted: NodeId,
}

/// Change log of one `process_candidates` call.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CandidateOutcome {
    /// Candidates linked while below the desired degree.
    pub added: Vec<NodeId>,
    /// Candidates linked by evicting an existing neighbor.
    pub replaced: Vec<Replacement>,
}

/// Per-interval change summary.
///
/// `adds` counts every table insertion including those made by replacements,
/// so `adds - expiries - replacements` accumulated over a run equals the
/// final edge count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalStats {
    pub interval: u32,
    pub adds: u64,
    pub expiries: u64,
    pub replacements: u64,
    pub active_nodes: u32,
    pub mean_out_degree: f64,
}

/// State registry plus contact window; drives the algorithm one interval at
/// a time.
#[derive(Debug, Clone)]
pub struct OverlayEngine {
    config: OverlayConfig,
    sampler: DegreeSampler,
    run_seed: u64,
    window: ContactWindow,
    states: Vec<Option<NodeState>>,
    /// Activated nodes, kept ascending.
    active: Vec<NodeId>,
    edge_total: u64,
    next_interval: u32,
}

impl OverlayEngine {
    pub fn new(config: &OverlayConfig, num_nodes: u32, run_seed: u64) -> Result<Self> {
        config.validate()?;
        let window = ContactWindow::new(WindowParams { delta: config.delta }, num_nodes)?;
        Ok(Self {
            config: config.clone(),
            sampler: DegreeSampler::new(config),
            run_seed,
            window,
            states: vec![None; num_nodes as usize],
            active: Vec::new(),
            edge_total: 0,
            next_interval: 0,
        })
    }

    pub fn config(&self) -> &OverlayConfig {
        &self.config
    }

    pub fn window(&self) -> &ContactWindow {
        &self.window
    }

    pub fn state(&self, i: NodeId) -> Option<&NodeState> {
        self.states.get(i.index()).and_then(Option::as_ref)
    }

    pub fn is_active(&self, i: NodeId) -> bool {
        self.state(i).is_some()
    }

    /// Active node ids, ascending.
    pub fn active_nodes(&self) -> &[NodeId] {
        &self.active
    }

    /// Total neighbor-table entries across all nodes.
    pub fn edge_total(&self) -> u64 {
        self.edge_total
    }

    /// Interval the next `step` call must carry.
    pub fn next_interval(&self) -> u32 {
        self.next_interval
    }

    /// First appearance of a node: samples its desired degree from the
    /// target distribution and registers an empty neighbor table.
    pub fn activate(&mut self, i: NodeId, t: u32) -> Result<&NodeState> {
        if i.0 >= self.window.num_nodes() {
            return Err(Error::NodeOutOfRange {
                node: i,
                num_nodes: self.window.num_nodes(),
            });
        }
        let slot = &mut self.states[i.index()];
        if slot.is_some() {
            return Err(Error::AlreadyActive(i));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(node_seed(self.run_seed, i.0));
        let desired_degree = self.sampler.sample(&mut rng);
        *slot = Some(NodeState {
            desired_degree,
            activated_at: t,
            table: HashMap::new(),
            rng,
        });
        let pos = self.active.partition_point(|&n| n < i);
        self.active.insert(pos, i);
        Ok(slot.as_ref().expect("just set"))
    }

    /// Drops the neighbors of `i` without any in-window contact. Returns the
    /// removed ids, ascending.
    pub fn expire_links(&mut self, i: NodeId) -> Vec<NodeId> {
        let window = &self.window;
        let Some(state) = self.states.get_mut(i.index()).and_then(Option::as_mut) else {
            return Vec::new();
        };
        let mut removed: Vec<NodeId> = state
            .table
            .keys()
            .filter(|&&j| window.contact_count(i, j) == 0)
            .copied()
            .collect();
        removed.sort_unstable();
        for j in &removed {
            state.table.remove(j);
        }
        self.edge_total -= removed.len() as u64;
        removed
    }

    /// Considers every eligible non-neighbor of `i`, strongest contact
    /// first (ties by ascending id). Below the desired degree a candidate is
    /// linked outright; at the cap it replaces, with probability `omega`, a
    /// neighbor drawn uniformly among those with the fewest in-window
    /// contacts.
    pub fn process_candidates(&mut self, i: NodeId) -> CandidateOutcome {
        let t = self.window.current_interval().max(0) as u32;
        let mut outcome = CandidateOutcome::default();
        let window = &self.window;
        let config = &self.config;
        let Some(state) = self.states.get_mut(i.index()).and_then(Option::as_mut) else {
            return outcome;
        };

        let mut candidates: Vec<(NodeId, u32)> = window
            .eligible_peers(i, config.c_min)
            .into_iter()
            .filter(|(j, _)| !state.table.contains_key(j))
            .collect();
        candidates.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));

        for (j, _count) in candidates {
            if state.table.len() < state.desired_degree as usize {
                state.table.insert(j, t);
                self.edge_total += 1;
                outcome.added.push(j);
                continue;
            }
            if state.desired_degree == 0 {
                continue;
            }
            let coin: f64 = state.rng.random();
            if coin >= config.omega {
                continue;
            }
            let min_count = state
                .table
                .keys()
                .map(|&k| window.contact_count(i, k))
                .min()
                .expect("table is full, hence non-empty");
            let mut weakest: Vec<NodeId> = state
                .table
                .keys()
                .filter(|&&k| window.contact_count(i, k) == min_count)
                .copied()
                .collect();
            weakest.sort_unstable();
            let evicted = weakest[state.rng.random_range(0..weakest.len())];
            state.table.remove(&evicted);
            state.table.insert(j, t);
            outcome.replaced.push(Replacement { added: j, evicted });
        }
        outcome
    }

    /// Runs one interval: advances the window, activates first-seen nodes,
    /// then for every active node (ascending id) expires idle links and
    /// processes candidates.
    pub fn step(&mut self, t: u32, events: &[ContactEvent]) -> Result<IntervalStats> {
        if t != self.next_interval {
            return Err(Error::IntervalMismatch {
                expected: self.next_interval,
                found: t,
            });
        }
        self.window.advance(events)?;

        let mut newcomers: Vec<NodeId> = events
            .iter()
            .flat_map(|e| [e.a, e.b])
            .filter(|&n| !self.is_active(n))
            .collect();
        newcomers.sort_unstable();
        newcomers.dedup();
        for n in newcomers {
            self.activate(n, t)?;
        }

        let mut stats = IntervalStats {
            interval: t,
            adds: 0,
            expiries: 0,
            replacements: 0,
            active_nodes: self.active.len() as u32,
            mean_out_degree: 0.0,
        };
        for idx in 0..self.active.len() {
            let i = self.active[idx];
            stats.expiries += self.expire_links(i).len() as u64;
            let outcome = self.process_candidates(i);
            stats.adds += (outcome.added.len() + outcome.replaced.len()) as u64;
            stats.replacements += outcome.replaced.len() as u64;
        }
        if !self.active.is_empty() {
            stats.mean_out_degree = self.edge_total as f64 / self.active.len() as f64;
        }
        self.next_interval = t + 1;
        Ok(stats)
    }

    /// Captures the overlay as of the last processed interval.
    pub fn snapshot(&self) -> OverlaySnapshot {
        let interval = self.window.current_interval().max(0) as u32;
        let mut nodes = Vec::with_capacity(self.active.len());
        let mut edges = Vec::with_capacity(self.edge_total as usize);
        for &i in &self.active {
            let state = self.state(i).expect("active implies state");
            nodes.push(SnapshotNode {
                id: i,
                desired_degree: state.desired_degree,
                out_degree: state.out_degree(),
            });
            for (&j, &established_at) in &state.table {
                edges.push(SnapshotEdge {
                    src: i,
                    dst: j,
                    established_at,
                });
            }
        }
        edges.sort_unstable_by_key(|e| (e.src, e.dst));
        OverlaySnapshot {
            interval,
            nodes,
            edges,
        }
    }
}
