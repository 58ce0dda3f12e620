//! Connectivity metrics on the undirected projection of a snapshot.

use std::collections::VecDeque;

use rand::Rng;
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::overlay::OverlaySnapshot;

/// Compact undirected adjacency over the active nodes of a snapshot.
struct Projection {
    /// Adjacency by compact index; neighbor lists are deduplicated.
    adj: Vec<Vec<u32>>,
}

impl Projection {
    fn new(snapshot: &OverlaySnapshot) -> Self {
        let n = snapshot.nodes.len();
        let mut index = std::collections::HashMap::with_capacity(n);
        for (k, node) in snapshot.nodes.iter().enumerate() {
            index.insert(node.id, k as u32);
        }
        let mut adj = vec![Vec::new(); n];
        for e in &snapshot.edges {
            let (u, v) = (index[&e.src], index[&e.dst]);
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Self { adj }
    }

    fn len(&self) -> usize {
        self.adj.len()
    }

    /// BFS from `src`: eccentricity, sum of finite distances and number of
    /// nodes reached (excluding `src`).
    fn bfs(&self, src: u32) -> (u32, u64, u64) {
        let mut dist = vec![u32::MAX; self.len()];
        let mut queue = VecDeque::new();
        dist[src as usize] = 0;
        queue.push_back(src);
        let (mut ecc, mut sum, mut reached) = (0u32, 0u64, 0u64);
        while let Some(u) = queue.pop_front() {
            let du = dist[u as usize];
            for &v in &self.adj[u as usize] {
                if dist[v as usize] == u32::MAX {
                    dist[v as usize] = du + 1;
                    ecc = ecc.max(du + 1);
                    sum += u64::from(du + 1);
                    reached += 1;
                    queue.push_back(v);
                }
            }
        }
        (ecc, sum, reached)
    }

    /// Component membership per compact index plus component sizes.
    fn components(&self) -> (Vec<u32>, Vec<usize>) {
        let n = self.len();
        let mut label = vec![u32::MAX; n];
        let mut sizes = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..n {
            if label[start] != u32::MAX {
                continue;
            }
            let id = sizes.len() as u32;
            let mut size = 0usize;
            label[start] = id;
            queue.push_back(start as u32);
            while let Some(u) = queue.pop_front() {
                size += 1;
                for &v in &self.adj[u as usize] {
                    if label[v as usize] == u32::MAX {
                        label[v as usize] = id;
                        queue.push_back(v);
                    }
                }
            }
            sizes.push(size);
        }
        (label, sizes)
    }
}

/// Sizes of the weakly connected components, descending. Sizes sum to the
/// active node count; isolated nodes count as singletons.
pub fn weakly_connected_components(snapshot: &OverlaySnapshot) -> Vec<usize> {
    let projection = Projection::new(snapshot);
    let (_, mut sizes) = projection.components();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    sizes
}

/// Sampled distance metrics of the largest weakly connected component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiameterEstimate {
    /// Largest eccentricity observed; a lower bound on the true diameter.
    pub diameter_lower_bound: u32,
    /// Mean finite source-to-node distance over the sampled sources.
    pub mean_shortest_path: f64,
    /// BFS sources actually used.
    pub sources: u32,
    /// Size of the component sampled from.
    pub component_size: usize,
}

fn diameter_sources<R: Rng + ?Sized>(
    snapshot: &OverlaySnapshot,
    sample_size: usize,
    rng: &mut R,
) -> Result<(Projection, Vec<u32>, usize)> {
    if sample_size == 0 {
        return Err(Error::InvalidConfig("sample_size must be >= 1".into()));
    }
    if snapshot.nodes.is_empty() {
        return Err(Error::InvalidConfig(
            "diameter of an empty snapshot".into(),
        ));
    }
    let projection = Projection::new(snapshot);
    let (label, sizes) = projection.components();
    let largest = sizes
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        .map(|(i, _)| i as u32)
        .expect("non-empty snapshot has components");
    let mut members: Vec<u32> = (0..projection.len() as u32)
        .filter(|&v| label[v as usize] == largest)
        .collect();
    let component_size = members.len();
    // A random permutation truncated to the sample size keeps the source set
    // of a smaller sample a prefix of a larger one for the same rng stream.
    for k in (1..members.len()).rev() {
        let j = rng.random_range(0..=k);
        members.swap(k, j);
    }
    members.truncate(sample_size.min(members.len()));
    Ok((projection, members, component_size))
}

fn summarize(results: impl Iterator<Item = (u32, u64, u64)>, component_size: usize) -> DiameterEstimate {
    let (mut diameter, mut sum, mut reached, mut sources) = (0u32, 0u64, 0u64, 0u32);
    for (ecc, s, r) in results {
        diameter = diameter.max(ecc);
        sum += s;
        reached += r;
        sources += 1;
    }
    DiameterEstimate {
        diameter_lower_bound: diameter,
        mean_shortest_path: if reached == 0 {
            0.0
        } else {
            sum as f64 / reached as f64
        },
        sources,
        component_size,
    }
}

/// BFS from `sample_size` random sources of the largest weakly connected
/// component. The reported diameter is the maximum observed eccentricity and
/// can only grow with more sources.
pub fn estimate_diameter<R: Rng + ?Sized>(
    snapshot: &OverlaySnapshot,
    sample_size: usize,
    rng: &mut R,
) -> Result<DiameterEstimate> {
    let (projection, sources, component_size) = diameter_sources(snapshot, sample_size, rng)?;
    Ok(summarize(
        sources.into_iter().map(|s| projection.bfs(s)),
        component_size,
    ))
}

/// Parallel variant of [`estimate_diameter`]; sources are explored
/// concurrently. Integer accumulation keeps the result identical to the
/// sequential route.
#[cfg(feature = "parallel")]
pub fn par_estimate_diameter<R: Rng + ?Sized>(
    snapshot: &OverlaySnapshot,
    sample_size: usize,
    rng: &mut R,
) -> Result<DiameterEstimate> {
    let (projection, sources, component_size) = diameter_sources(snapshot, sample_size, rng)?;
    let results: Vec<(u32, u64, u64)> = sources
        .par_iter()
        .map(|&s| projection.bfs(s))
        .collect();
    Ok(summarize(results.into_iter(), component_size))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::overlay::{SnapshotEdge, SnapshotNode};
    use crate::trace::NodeId;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn snapshot_from_edges(n: u32, pairs: &[(u32, u32)]) -> OverlaySnapshot {
        let nodes = (0..n)
            .map(|i| SnapshotNode {
                id: NodeId(i),
                desired_degree: 10,
                out_degree: pairs.iter().filter(|&&(a, _)| a == i).count() as u32,
            })
            .collect();
        let edges = pairs
            .iter()
            .map(|&(a, b)| SnapshotEdge {
                src: NodeId(a),
                dst: NodeId(b),
                established_at: 0,
            })
            .collect();
        OverlaySnapshot {
            interval: 0,
            nodes,
            edges,
        }
    }

    #[test]
    fn edgeless_graph_is_all_singletons() {
        let snap = snapshot_from_edges(5, &[]);
        assert_eq!(weakly_connected_components(&snap), vec![1, 1, 1, 1, 1]);
    }

    #[test]
    fn directed_chain_is_one_component() {
        let snap = snapshot_from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
        assert_eq!(weakly_connected_components(&snap), vec![5]);
    }

    #[test]
    fn sizes_sum_to_node_count() {
        let snap = snapshot_from_edges(7, &[(0, 1), (2, 3), (3, 4)]);
        let sizes = weakly_connected_components(&snap);
        assert_eq!(sizes.iter().sum::<usize>(), 7);
        assert_eq!(sizes, vec![3, 2, 1, 1]);
    }

    #[test]
    fn path_graph_diameter_with_full_sampling() {
        let snap = snapshot_from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let est = estimate_diameter(&snap, 5, &mut rng).unwrap();
        assert_eq!(est.diameter_lower_bound, 4);
        assert_eq!(est.sources, 5);
        assert_eq!(est.component_size, 5);
    }

    #[test]
    fn complete_graph_diameter_is_one() {
        let mut pairs = Vec::new();
        for a in 0..6u32 {
            for b in 0..6u32 {
                if a != b {
                    pairs.push((a, b));
                }
            }
        }
        let snap = snapshot_from_edges(6, &pairs);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let est = estimate_diameter(&snap, 6, &mut rng).unwrap();
        assert_eq!(est.diameter_lower_bound, 1);
        assert!((est.mean_shortest_path - 1.0).abs() < 1e-12);
    }

    #[test]
    fn full_sampling_matches_all_pairs_bfs_oracle() {
        // pseudo-random sparse graph
        let n = 40u32;
        let mut pairs = Vec::new();
        let mut x = 9u64;
        for _ in 0..60 {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let a = (x >> 33) as u32 % n;
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let b = (x >> 33) as u32 % n;
            if a != b {
                pairs.push((a, b));
            }
        }
        let snap = snapshot_from_edges(n, &pairs);

        // oracle: exhaustive BFS over the largest component
        let proj = Projection::new(&snap);
        let (label, sizes) = proj.components();
        let largest = sizes
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
            .map(|(i, _)| i as u32)
            .unwrap();
        let mut want_diameter = 0u32;
        for v in 0..proj.len() as u32 {
            if label[v as usize] == largest {
                let (ecc, _, _) = proj.bfs(v);
                want_diameter = want_diameter.max(ecc);
            }
        }

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let est = estimate_diameter(&snap, n as usize, &mut rng).unwrap();
        assert_eq!(est.diameter_lower_bound, want_diameter);
    }

    #[test]
    fn sample_size_zero_rejected() {
        let snap = snapshot_from_edges(3, &[(0, 1)]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(estimate_diameter(&snap, 0, &mut rng).is_err());
    }

    #[test]
    fn diameter_monotone_in_sample_size() {
        let snap = snapshot_from_edges(
            9,
            &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8)],
        );
        let mut prev = 0u32;
        for k in 1..=9usize {
            let mut rng = ChaCha8Rng::seed_from_u64(77);
            let est = estimate_diameter(&snap, k, &mut rng).unwrap();
            assert!(
                est.diameter_lower_bound >= prev,
                "sample {k}: {} < {prev}",
                est.diameter_lower_bound
            );
            prev = est.diameter_lower_bound;
        }
        assert_eq!(prev, 8);
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_equals_sequential() {
        let snap = snapshot_from_edges(
            12,
            &[(0, 1), (1, 2), (2, 3), (4, 5), (5, 6), (0, 7), (8, 9), (9, 10), (10, 11), (3, 8)],
        );
        let mut rng_a = ChaCha8Rng::seed_from_u64(5);
        let mut rng_b = ChaCha8Rng::seed_from_u64(5);
        let seq = estimate_diameter(&snap, 6, &mut rng_a).unwrap();
        let par = par_estimate_diameter(&snap, 6, &mut rng_b).unwrap();
        assert_eq!(seq, par);
    }
}
