//! Rendering and re-reading of the on-disk artifact formats.
//!
//! Everything here is plain text built deterministically from the inputs:
//! the same run always renders byte-identical files. Node ids in artifacts
//! are external (as found in the source trace); the dense index only lives
//! in memory.

use std::collections::BTreeMap;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::analytics::{DegreeHistogram, FitResult};
use crate::error::{Error, Result};
use crate::overlay::{IntervalStats, OverlaySnapshot, SnapshotEdge, SnapshotNode};
use crate::trace::{ContactTrace, NodeId};

/// `degree,count,pmf,ccdf` over observed degrees, ascending.
pub fn histogram_csv(hist: &DegreeHistogram) -> String {
    let mut out = String::from("degree,count,pmf,ccdf\n");
    for (d, c) in hist.counts() {
        out.push_str(&format!("{},{},{},{}\n", d, c, hist.pmf(d), hist.ccdf(d)));
    }
    out
}

/// `src,dst,established_at` with external ids, sorted by `(src, dst)`.
pub fn edges_csv(snapshot: &OverlaySnapshot, external_ids: &[u64]) -> String {
    let mut out = String::from("src,dst,established_at\n");
    for e in &snapshot.edges {
        out.push_str(&format!(
            "{},{},{}\n",
            external_ids[e.src.index()],
            external_ids[e.dst.index()],
            e.established_at
        ));
    }
    out
}

/// `interval,adds,expiries,replacements,active_nodes,mean_out_degree`.
pub fn series_csv(series: &[IntervalStats]) -> String {
    let mut out = String::from("interval,adds,expiries,replacements,active_nodes,mean_out_degree\n");
    for s in series {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            s.interval, s.adds, s.expiries, s.replacements, s.active_nodes, s.mean_out_degree
        ));
    }
    out
}

/// `dense_id,external_id` for every node of the trace.
pub fn node_map_csv(trace: &ContactTrace) -> String {
    let mut out = String::from("dense_id,external_id\n");
    for (dense, ext) in trace.external_ids().iter().enumerate() {
        out.push_str(&format!("{dense},{ext}\n"));
    }
    out
}

/// JSON-serializable snapshot summary: interval, counts and the desired
/// degree of every active node (by external id).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotSummary {
    pub interval: u32,
    pub node_count: usize,
    pub edge_count: usize,
    /// `[external id, desired degree]` pairs, ascending by id.
    pub desired_degrees: Vec<(u64, u32)>,
}

impl SnapshotSummary {
    pub fn new(snapshot: &OverlaySnapshot, external_ids: &[u64]) -> Self {
        let mut desired_degrees: Vec<(u64, u32)> = snapshot
            .nodes
            .iter()
            .map(|n| (external_ids[n.id.index()], n.desired_degree))
            .collect();
        desired_degrees.sort_unstable();
        Self {
            interval: snapshot.interval,
            node_count: snapshot.node_count(),
            edge_count: snapshot.edge_count(),
            desired_degrees,
        }
    }
}

pub fn summary_json(snapshot: &OverlaySnapshot, external_ids: &[u64]) -> String {
    let mut s = serde_json::to_string_pretty(&SnapshotSummary::new(snapshot, external_ids))
        .expect("serializable");
    s.push('\n');
    s
}

/// One fit in the report; failed fits keep their reason instead of aborting
/// the artifact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FitOutcome {
    Fit(FitResult),
    Failed { error: String },
}

impl From<Result<FitResult>> for FitOutcome {
    fn from(r: Result<FitResult>) -> Self {
        match r {
            Ok(fit) => FitOutcome::Fit(fit),
            Err(e) => FitOutcome::Failed {
                error: e.to_string(),
            },
        }
    }
}

/// The `fit.json` artifact: least-squares and MLE results side by side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub lsq: FitOutcome,
    pub mle: FitOutcome,
}

pub fn fit_report_json(report: &FitReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("serializable");
    s.push('\n');
    s
}

/// Reads an edge-list CSV (external ids) back; tolerates a missing header.
pub fn parse_edges_csv<R: BufRead>(input: R) -> Result<Vec<(u64, u64, u32)>> {
    let mut out = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line_no == 1 && line.starts_with("src") {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("expected `src,dst,established_at`, got `{line}`"),
            });
        }
        let parse = |s: &str, what: &str| -> Result<u64> {
            s.parse().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("invalid {what} `{s}`"),
            })
        };
        let src = parse(fields[0], "src")?;
        let dst = parse(fields[1], "dst")?;
        let est = parse(fields[2], "established_at")? as u32;
        out.push((src, dst, est));
    }
    Ok(out)
}

/// Rebuilds a snapshot from a saved edge list plus, when available, the
/// snapshot summary (which contributes zero-degree nodes and desired
/// degrees). Returns the snapshot and the dense-to-external id table.
pub fn snapshot_from_artifacts(
    edges: &[(u64, u64, u32)],
    summary: Option<&SnapshotSummary>,
) -> (OverlaySnapshot, Vec<u64>) {
    let mut known: BTreeMap<u64, u32> = BTreeMap::new();
    if let Some(s) = summary {
        for &(ext, dd) in &s.desired_degrees {
            known.insert(ext, dd);
        }
    }
    for &(src, dst, _) in edges {
        known.entry(src).or_insert(0);
        known.entry(dst).or_insert(0);
    }
    let external_ids: Vec<u64> = known.keys().copied().collect();
    let dense: BTreeMap<u64, NodeId> = external_ids
        .iter()
        .enumerate()
        .map(|(i, &ext)| (ext, NodeId(i as u32)))
        .collect();

    let mut out_deg = vec![0u32; external_ids.len()];
    let mut dense_edges: Vec<SnapshotEdge> = edges
        .iter()
        .map(|&(src, dst, established_at)| {
            let e = SnapshotEdge {
                src: dense[&src],
                dst: dense[&dst],
                established_at,
            };
            out_deg[e.src.index()] += 1;
            e
        })
        .collect();
    dense_edges.sort_unstable_by_key(|e| (e.src, e.dst));

    let nodes: Vec<SnapshotNode> = known
        .values()
        .zip(external_ids.iter())
        .enumerate()
        .map(|(i, (&dd, _))| SnapshotNode {
            id: NodeId(i as u32),
            desired_degree: dd,
            out_degree: out_deg[i],
        })
        .collect();

    let snapshot = OverlaySnapshot {
        interval: summary.map_or(0, |s| s.interval),
        nodes,
        edges: dense_edges,
    };
    (snapshot, external_ids)
}
