//! Interval-based contact traces.
//!
//! A trace is a sequence of pairwise contact events bucketed into discrete
//! intervals. Contacts are undirected meetings; within one interval a pair
//! either met or it did not, so duplicate events for the same unordered pair
//! collapse to one. Arbitrary node ids found in files are re-mapped to dense
//! indices; the original ids are kept so outputs can be expressed in the
//! caller's id space.

use std::collections::HashMap;
use std::fmt;
use std::io::{BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampling::CumulativeTable;

/// Dense node index, unique within a trace.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

/// One undirected contact in one interval. Normalized events satisfy `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ContactEvent {
    pub interval: u32,
    pub a: NodeId,
    pub b: NodeId,
}

/// Input format tag for [`parse_trace`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TraceFormat {
    /// Line-oriented CSV: `interval,node_a,node_b`, `#` comments allowed.
    #[default]
    Csv,
}

/// Parameters of the synthetic trace generator.
///
/// Each node gets an activity weight drawn once from a Pareto distribution
/// with the given shape; smaller shapes produce heavier tails, i.e. a few
/// nodes that meet far more peers than the rest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticParams {
    pub num_nodes: u32,
    pub num_intervals: u32,
    pub events_per_interval: u32,
    pub activity_shape: f64,
}

impl SyntheticParams {
    fn validate(&self) -> Result<()> {
        if self.num_nodes < 2 {
            return Err(Error::InvalidParams(format!(
                "num_nodes must be >= 2, got {}",
                self.num_nodes
            )));
        }
        if self.num_intervals == 0 {
            return Err(Error::InvalidParams("num_intervals must be positive".into()));
        }
        if self.events_per_interval == 0 {
            return Err(Error::InvalidParams(
                "events_per_interval must be positive".into(),
            ));
        }
        if !(self.activity_shape > 0.0) || !self.activity_shape.is_finite() {
            return Err(Error::InvalidParams(format!(
                "activity_shape must be a positive real, got {}",
                self.activity_shape
            )));
        }
        Ok(())
    }
}

/// An immutable, normalized contact trace.
#[derive(Debug, Clone, PartialEq)]
pub struct ContactTrace {
    num_nodes: u32,
    num_intervals: u32,
    events: Vec<ContactEvent>,
    /// Dense id -> id as found in the input (identity for synthetic traces).
    external_ids: Vec<u64>,
    /// `events[offsets[t]..offsets[t + 1]]` are the events of interval `t`.
    offsets: Vec<usize>,
}

/// Sorts by `(interval, a, b)` with `a < b` enforced and duplicate unordered
/// pairs within an interval collapsed. Idempotent.
pub fn normalize_events(mut events: Vec<ContactEvent>) -> Vec<ContactEvent> {
    for e in &mut events {
        if e.a > e.b {
            std::mem::swap(&mut e.a, &mut e.b);
        }
    }
    events.sort_unstable_by_key(|e| (e.interval, e.a, e.b));
    events.dedup();
    events
}

impl ContactTrace {
    /// Builds a trace from already-dense events. `num_intervals` is raised to
    /// cover the last event if needed.
    pub fn from_events(
        num_nodes: u32,
        num_intervals: u32,
        events: Vec<ContactEvent>,
    ) -> Result<Self> {
        let external_ids = (0..u64::from(num_nodes)).collect();
        Self::build(num_nodes, num_intervals, events, external_ids)
    }

    fn build(
        num_nodes: u32,
        num_intervals: u32,
        events: Vec<ContactEvent>,
        external_ids: Vec<u64>,
    ) -> Result<Self> {
        let events = normalize_events(events);
        let mut num_intervals = num_intervals;
        for e in &events {
            if e.a == e.b {
                return Err(Error::SelfContact(e.a));
            }
            if e.b.0 >= num_nodes {
                return Err(Error::NodeOutOfRange {
                    node: e.b,
                    num_nodes,
                });
            }
            num_intervals = num_intervals.max(e.interval + 1);
        }
        let mut offsets = Vec::with_capacity(num_intervals as usize + 1);
        offsets.push(0);
        let mut pos = 0usize;
        for t in 0..num_intervals {
            while pos < events.len() && events[pos].interval == t {
                pos += 1;
            }
            offsets.push(pos);
        }
        Ok(Self {
            num_nodes,
            num_intervals,
            events,
            external_ids,
            offsets,
        })
    }

    pub fn num_nodes(&self) -> u32 {
        self.num_nodes
    }

    pub fn num_intervals(&self) -> u32 {
        self.num_intervals
    }

    pub fn num_events(&self) -> usize {
        self.events.len()
    }

    pub fn events(&self) -> &[ContactEvent] {
        &self.events
    }

    /// Events of interval `t` (empty for intervals without contacts).
    pub fn interval_events(&self, t: u32) -> &[ContactEvent] {
        let t = t as usize;
        &self.events[self.offsets[t]..self.offsets[t + 1]]
    }

    /// The id this node had in the source file.
    pub fn external_id(&self, node: NodeId) -> u64 {
        self.external_ids[node.index()]
    }

    pub fn external_ids(&self) -> &[u64] {
        &self.external_ids
    }

    /// Serializes back to the CSV interchange format using external ids.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# interval,node_a,node_b")?;
        for e in &self.events {
            writeln!(
                w,
                "{},{},{}",
                e.interval,
                self.external_id(e.a),
                self.external_id(e.b)
            )?;
        }
        Ok(())
    }

    pub fn stats(&self) -> TraceStats {
        let mut per_interval = vec![0u64; self.num_intervals as usize];
        let mut per_node = vec![0u64; self.num_nodes as usize];
        for e in &self.events {
            per_interval[e.interval as usize] += 1;
            per_node[e.a.index()] += 1;
            per_node[e.b.index()] += 1;
        }
        let (min, max) = per_interval
            .iter()
            .fold((u64::MAX, 0), |(lo, hi), &c| (lo.min(c), hi.max(c)));
        let mean = if per_interval.is_empty() {
            0.0
        } else {
            self.events.len() as f64 / per_interval.len() as f64
        };
        TraceStats {
            num_nodes: self.num_nodes,
            num_intervals: self.num_intervals,
            num_events: self.events.len() as u64,
            events_per_interval_min: if per_interval.is_empty() { 0 } else { min },
            events_per_interval_mean: mean,
            events_per_interval_max: max,
            per_node_contacts: per_node
                .iter()
                .enumerate()
                .map(|(i, &c)| (self.external_ids[i], c))
                .collect(),
        }
    }
}

/// Exact per-trace summary; serialized as the `stats` JSON artifact.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceStats {
    pub num_nodes: u32,
    pub num_intervals: u32,
    pub num_events: u64,
    pub events_per_interval_min: u64,
    pub events_per_interval_mean: f64,
    pub events_per_interval_max: u64,
    /// `(external id, total contacts)` pairs in dense-id order; the counts
    /// sum to twice the event count.
    pub per_node_contacts: Vec<(u64, u64)>,
}

/// Summary of a trace. Equivalent to [`ContactTrace::stats`].
pub fn trace_stats(trace: &ContactTrace) -> TraceStats {
    trace.stats()
}

/// Parses a contact trace from a line-oriented reader.
///
/// Node ids may be arbitrary nonnegative integers; they are re-mapped to
/// dense indices in ascending id order. Duplicate unordered pairs within an
/// interval collapse to a single event.
pub fn parse_trace<R: BufRead>(input: R, format: TraceFormat) -> Result<ContactTrace> {
    match format {
        TraceFormat::Csv => parse_csv(input),
    }
}

fn parse_csv<R: BufRead>(input: R) -> Result<ContactTrace> {
    let mut raw: Vec<(u32, u64, u64)> = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split(',');
        let (interval, a, b) = match (fields.next(), fields.next(), fields.next(), fields.next()) {
            (Some(t), Some(a), Some(b), None) => (t.trim(), a.trim(), b.trim()),
            _ => {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("expected `interval,node_a,node_b`, got `{line}`"),
                })
            }
        };
        let interval: i64 = interval.parse().map_err(|_| Error::Parse {
            line: line_no,
            msg: format!("invalid interval `{interval}`"),
        })?;
        if interval < 0 {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("negative interval {interval}"),
            });
        }
        if interval > i64::from(u32::MAX - 1) {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("interval {interval} too large"),
            });
        }
        let parse_id = |s: &str| -> Result<u64> {
            s.parse().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("invalid node id `{s}`"),
            })
        };
        let (ext_a, ext_b) = (parse_id(a)?, parse_id(b)?);
        if ext_a == ext_b {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("self contact on node {ext_a}"),
            });
        }
        raw.push((interval as u32, ext_a, ext_b));
    }
    if raw.is_empty() {
        return Err(Error::EmptyTrace);
    }

    // Dense ids follow ascending external id, so the mapping depends only on
    // the node set, not on line order; re-parsing a serialized trace yields
    // the identical structure.
    let mut external_ids: Vec<u64> = raw
        .iter()
        .flat_map(|&(_, a, b)| [a, b])
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    external_ids.dedup();
    let dense: HashMap<u64, NodeId> = external_ids
        .iter()
        .enumerate()
        .map(|(i, &ext)| (ext, NodeId(i as u32)))
        .collect();
    let events = raw
        .into_iter()
        .map(|(interval, a, b)| ContactEvent {
            interval,
            a: dense[&a],
            b: dense[&b],
        })
        .collect();
    let num_nodes = external_ids.len() as u32;
    ContactTrace::build(num_nodes, 0, events, external_ids)
}

/// Generates a synthetic trace with heterogeneous node activity.
///
/// Activity weights are drawn once per node from Pareto(`activity_shape`);
/// every event then picks endpoint `i` with probability proportional to its
/// weight and `j != i` the same way. Output is deterministic in `(params,
/// seed)`.
pub fn generate_synthetic(params: &SyntheticParams, seed: u64) -> Result<ContactTrace> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<f64> = (0..params.num_nodes)
        .map(|_| {
            let u: f64 = rng.random();
            // Pareto inverse CDF with scale 1: (1 - u)^(-1/shape), u in [0, 1).
            (1.0 - u).powf(-1.0 / params.activity_shape)
        })
        .collect();
    let table = CumulativeTable::from_weights(&weights);

    let mut events =
        Vec::with_capacity(params.num_intervals as usize * params.events_per_interval as usize);
    for t in 0..params.num_intervals {
        for _ in 0..params.events_per_interval {
            let i = table.sample(&mut rng) as u32;
            let j = loop {
                let j = table.sample(&mut rng) as u32;
                if j != i {
                    break j;
                }
            };
            events.push(ContactEvent {
                interval: t,
                a: NodeId(i),
                b: NodeId(j),
            });
        }
    }
    ContactTrace::from_events(params.num_nodes, params.num_intervals, events)
}
