//! Degree statistics, power-law fits and graph metrics over overlay
//! snapshots.

mod fit;
mod graph;

use std::collections::BTreeMap;

pub use fit::{loglog_fit_points, loglog_lsq_fit, mle_powerlaw_fit, FitMethod, FitResult};
pub use graph::{estimate_diameter, weakly_connected_components, DiameterEstimate};
#[cfg(feature = "parallel")]
pub use graph::par_estimate_diameter;

use crate::overlay::OverlaySnapshot;
use crate::trace::NodeId;

/// Which degree of the directed overlay to measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DegreeKind {
    /// Neighbor-table size; capped by the desired degree.
    #[default]
    Out,
    /// Number of tables a node appears in; unbounded.
    In,
}

/// Exact degree histogram over the active nodes of a snapshot.
///
/// Zero-degree nodes are included; the pmf over observed degrees sums to 1.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DegreeHistogram {
    counts: BTreeMap<u32, u64>,
    total: u64,
}

impl DegreeHistogram {
    pub fn from_snapshot(snapshot: &OverlaySnapshot, kind: DegreeKind) -> Self {
        let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
        match kind {
            DegreeKind::Out => {
                for n in &snapshot.nodes {
                    *counts.entry(n.out_degree).or_default() += 1;
                }
            }
            DegreeKind::In => {
                let mut in_deg: BTreeMap<NodeId, u32> =
                    snapshot.nodes.iter().map(|n| (n.id, 0)).collect();
                for e in &snapshot.edges {
                    *in_deg.get_mut(&e.dst).expect("edge dst is active") += 1;
                }
                for (_, d) in in_deg {
                    *counts.entry(d).or_default() += 1;
                }
            }
        }
        Self {
            counts,
            total: snapshot.nodes.len() as u64,
        }
    }

    /// Builds directly from a degree sequence.
    pub fn from_degrees<I: IntoIterator<Item = u32>>(degrees: I) -> Self {
        let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
        let mut total = 0;
        for d in degrees {
            *counts.entry(d).or_default() += 1;
            total += 1;
        }
        Self { counts, total }
    }

    /// Number of nodes the histogram covers.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn count(&self, degree: u32) -> u64 {
        self.counts.get(&degree).copied().unwrap_or(0)
    }

    /// Observed `(degree, count)` pairs, ascending.
    pub fn counts(&self) -> impl Iterator<Item = (u32, u64)> + '_ {
        self.counts.iter().map(|(&d, &c)| (d, c))
    }

    pub fn pmf(&self, degree: u32) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        self.count(degree) as f64 / self.total as f64
    }

    /// `(degree, pmf)` pairs over observed degrees, ascending.
    pub fn pmf_points(&self) -> Vec<(u32, f64)> {
        self.counts()
            .map(|(d, c)| (d, c as f64 / self.total as f64))
            .collect()
    }

    /// Fraction of nodes with degree `>= degree`.
    pub fn ccdf(&self, degree: u32) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        let above: u64 = self
            .counts
            .range(degree..)
            .map(|(_, &c)| c)
            .sum();
        above as f64 / self.total as f64
    }

    /// The degree of every node, expanded back out of the histogram.
    pub fn degree_sequence(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.total as usize);
        for (d, c) in self.counts() {
            out.extend(std::iter::repeat(d).take(c as usize));
        }
        out
    }
}

/// Out- or in-degree histogram of a snapshot.
pub fn degree_histogram(snapshot: &OverlaySnapshot, kind: DegreeKind) -> DegreeHistogram {
    DegreeHistogram::from_snapshot(snapshot, kind)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::overlay::{SnapshotEdge, SnapshotNode};

    fn star(hub_degree: u32) -> OverlaySnapshot {
        let mut nodes = vec![SnapshotNode {
            id: NodeId(0),
            desired_degree: hub_degree,
            out_degree: hub_degree,
        }];
        let mut edges = Vec::new();
        for k in 1..=hub_degree {
            nodes.push(SnapshotNode {
                id: NodeId(k),
                desired_degree: 5,
                out_degree: 0,
            });
            edges.push(SnapshotEdge {
                src: NodeId(0),
                dst: NodeId(k),
                established_at: 0,
            });
        }
        OverlaySnapshot {
            interval: 0,
            nodes,
            edges,
        }
    }

    #[test]
    fn star_graph_histogram() {
        let snap = star(4);
        let h = degree_histogram(&snap, DegreeKind::Out);
        assert_eq!(h.count(4), 1);
        assert_eq!(h.count(0), 4);
        assert_eq!(h.total(), 5);
        let pmf_sum: f64 = h.pmf_points().iter().map(|(_, p)| p).sum();
        assert!((pmf_sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn in_degree_counts_reverse_direction() {
        let snap = star(3);
        let h = degree_histogram(&snap, DegreeKind::In);
        // hub has in-degree 0, leaves have in-degree 1
        assert_eq!(h.count(0), 1);
        assert_eq!(h.count(1), 3);
    }

    #[test]
    fn empty_snapshot_empty_histogram() {
        let snap = OverlaySnapshot {
            interval: 0,
            nodes: vec![],
            edges: vec![],
        };
        let h = degree_histogram(&snap, DegreeKind::Out);
        assert!(h.is_empty());
        assert_eq!(h.pmf(0), 0.0);
        assert_eq!(h.ccdf(0), 0.0);
    }

    #[test]
    fn total_equals_active_node_count() {
        let snap = star(7);
        let h = degree_histogram(&snap, DegreeKind::Out);
        assert_eq!(h.total() as usize, snap.node_count());
    }

    #[test]
    fn histogram_matches_manual_tally() {
        // brute-force per-node table-size tally
        let snap = star(6);
        let h = degree_histogram(&snap, DegreeKind::Out);
        let mut tally: BTreeMap<u32, u64> = BTreeMap::new();
        for n in &snap.nodes {
            let sz = snap.edges.iter().filter(|e| e.src == n.id).count() as u32;
            *tally.entry(sz).or_default() += 1;
        }
        assert_eq!(h.counts().collect::<Vec<_>>(), tally.into_iter().collect::<Vec<_>>());
    }

    #[test]
    fn ccdf_is_monotone_nonincreasing() {
        let h = DegreeHistogram::from_degrees([0, 1, 1, 2, 5, 5, 5, 9]);
        let mut prev = 1.0;
        for d in 0..=10 {
            let c = h.ccdf(d);
            assert!(c <= prev + 1e-15);
            prev = c;
        }
        assert!((h.ccdf(0) - 1.0).abs() < 1e-15);
        assert!((h.ccdf(10) - 0.0).abs() < 1e-15);
    }
}
