//! Sliding contact window.
//!
//! For every node the window keeps, per peer, the number of distinct recent
//! intervals with at least one contact and the interval of the most recent
//! one. "Recent" means the last `delta` intervals including the current one,
//! i.e. `[t - delta + 1, t]`; with `delta = 1` only contacts of the current
//! interval count.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::trace::{ContactEvent, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowParams {
    /// Window length in trace intervals, at least 1.
    pub delta: u32,
}

/// A peer's in-window contact summary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PeerContact {
    /// Distinct in-window intervals with a contact; always in `1..=delta`.
    pub count: u32,
    /// Most recent in-window contact interval.
    pub last_contact: u32,
}

/// Per-node aggregation of contacts over the sliding window.
///
/// Counting is symmetric: `contact_count(i, j) == contact_count(j, i)`.
/// Entries whose contacts all fell out of the window are dropped, so a
/// stored peer always has at least one in-window contact.
#[derive(Debug, Clone)]
pub struct ContactWindow {
    delta: u32,
    num_nodes: u32,
    /// Interval of the last `advance`; -1 before the first one.
    current: i64,
    peers: Vec<HashMap<NodeId, PeerContact>>,
    /// Normalized pair lists of the last `delta` intervals, oldest first.
    recent: VecDeque<Vec<(NodeId, NodeId)>>,
}

impl ContactWindow {
    pub fn new(params: WindowParams, num_nodes: u32) -> Result<Self> {
        if params.delta == 0 {
            return Err(Error::InvalidConfig("delta must be >= 1".into()));
        }
        Ok(Self {
            delta: params.delta,
            num_nodes,
            current: -1,
            peers: vec![HashMap::new(); num_nodes as usize],
            recent: VecDeque::with_capacity(params.delta as usize),
        })
    }

    pub fn delta(&self) -> u32 {
        self.delta
    }

    pub fn num_nodes(&self) -> u32 {
        self.num_nodes
    }

    /// Interval of the last `advance`, or -1 if none happened yet.
    pub fn current_interval(&self) -> i64 {
        self.current
    }

    /// Moves the window to the next interval, folding in that interval's
    /// events and dropping contributions that fell out of range.
    ///
    /// All events must carry exactly `current_interval() + 1`.
    pub fn advance(&mut self, events: &[ContactEvent]) -> Result<u32> {
        let t = (self.current + 1) as u32;
        let mut pairs = Vec::with_capacity(events.len());
        for e in events {
            if e.interval != t {
                return Err(Error::IntervalMismatch {
                    expected: t,
                    found: e.interval,
                });
            }
            if e.a == e.b {
                return Err(Error::SelfContact(e.a));
            }
            let hi = e.a.max(e.b);
            if hi.0 >= self.num_nodes {
                return Err(Error::NodeOutOfRange {
                    node: hi,
                    num_nodes: self.num_nodes,
                });
            }
            pairs.push((e.a.min(e.b), e.a.max(e.b)));
        }
        // A pair counts once per interval regardless of how often it appears.
        pairs.sort_unstable();
        pairs.dedup();

        if self.recent.len() == self.delta as usize {
            let expired = self.recent.pop_front().expect("non-empty");
            for (a, b) in expired {
                self.forget(a, b);
                self.forget(b, a);
            }
        }
        for &(a, b) in &pairs {
            self.record(a, b, t);
            self.record(b, a, t);
        }
        self.recent.push_back(pairs);
        self.current = i64::from(t);
        Ok(t)
    }

    fn record(&mut self, node: NodeId, peer: NodeId, t: u32) {
        let entry = self.peers[node.index()]
            .entry(peer)
            .or_insert(PeerContact {
                count: 0,
                last_contact: t,
            });
        entry.count += 1;
        entry.last_contact = t;
    }

    fn forget(&mut self, node: NodeId, peer: NodeId) {
        let map = &mut self.peers[node.index()];
        match map.get_mut(&peer) {
            Some(c) if c.count > 1 => c.count -= 1,
            Some(_) => {
                map.remove(&peer);
            }
            None => unreachable!("expired contact without window entry"),
        }
    }

    /// Distinct in-window intervals with a contact between `i` and `j`;
    /// 0 for unknown pairs or ids outside the trace.
    pub fn contact_count(&self, i: NodeId, j: NodeId) -> u32 {
        self.peers
            .get(i.index())
            .and_then(|m| m.get(&j))
            .map_or(0, |c| c.count)
    }

    /// Most recent in-window contact interval of the pair, if any.
    pub fn last_contact(&self, i: NodeId, j: NodeId) -> Option<u32> {
        self.peers
            .get(i.index())
            .and_then(|m| m.get(&j))
            .map(|c| c.last_contact)
    }

    /// Peers of `i` with at least `c_min` in-window contact intervals,
    /// ascending by id.
    pub fn active_peers(&self, i: NodeId, c_min: u32) -> Vec<NodeId> {
        self.eligible_peers(i, c_min).into_iter().map(|(j, _)| j).collect()
    }

    /// Like [`active_peers`](Self::active_peers) but keeps the counts.
    pub fn eligible_peers(&self, i: NodeId, c_min: u32) -> Vec<(NodeId, u32)> {
        let c_min = c_min.max(1);
        let Some(map) = self.peers.get(i.index()) else {
            return Vec::new();
        };
        let mut out: Vec<(NodeId, u32)> = map
            .iter()
            .filter(|(_, c)| c.count >= c_min)
            .map(|(&j, c)| (j, c.count))
            .collect();
        out.sort_unstable_by_key(|&(j, _)| j);
        out
    }

    /// All in-window peers of `i` with their summaries.
    pub fn peers_of(&self, i: NodeId) -> impl Iterator<Item = (NodeId, PeerContact)> + '_ {
        self.peers[i.index()].iter().map(|(&j, &c)| (j, c))
    }
}
