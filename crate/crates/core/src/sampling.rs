//! Seed derivation and inverse-CDF sampling shared by the trace generator and
//! the degree sampler.

use rand::Rng;

/// SplitMix64 finalizer. Stable across platforms and releases; used wherever a
/// derived seed must stay reproducible.
pub fn mix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Seed of a node's private random stream. Each node draws from its own
/// stream so that results do not depend on the order nodes are visited.
pub fn node_seed(run_seed: u64, node: u32) -> u64 {
    mix64(run_seed ^ mix64(u64::from(node) + 1))
}

/// FNV-1a over a byte string; used to derive per-point seeds in sweeps.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// Cumulative table for inverse-CDF sampling over a finite support.
///
/// `cdf[i]` is the normalized cumulative weight through index `i`; a draw
/// `u in [0, 1)` maps to the smallest `i` with `u < cdf[i]`.
#[derive(Debug, Clone)]
pub struct CumulativeTable {
    cdf: Vec<f64>,
}

impl CumulativeTable {
    /// Builds the table from nonnegative weights. Weights need not be
    /// normalized; the total must be positive and finite.
    pub fn from_weights(weights: &[f64]) -> Self {
        assert!(!weights.is_empty(), "empty weight vector");
        let mut cdf = Vec::with_capacity(weights.len());
        let mut cum = 0.0f64;
        for &w in weights {
            assert!(w.is_finite() && w >= 0.0, "weight must be finite and >= 0");
            cum += w;
            cdf.push(cum);
        }
        assert!(cum > 0.0, "total weight must be positive");
        for c in &mut cdf {
            *c /= cum;
        }
        Self { cdf }
    }

    pub fn len(&self) -> usize {
        self.cdf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cdf.is_empty()
    }

    /// Index of the bin a uniform draw `u in [0, 1)` falls into.
    pub fn index_of(&self, u: f64) -> usize {
        let idx = self.cdf.partition_point(|&c| c <= u);
        idx.min(self.cdf.len() - 1)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        self.index_of(u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_bin_always_zero() {
        let t = CumulativeTable::from_weights(&[3.0]);
        assert_eq!(t.index_of(0.0), 0);
        assert_eq!(t.index_of(0.999_999), 0);
    }

    #[test]
    fn boundaries_pick_next_bin() {
        // cdf = [0.25, 0.75, 1.0]
        let t = CumulativeTable::from_weights(&[1.0, 2.0, 1.0]);
        assert_eq!(t.index_of(0.0), 0);
        assert_eq!(t.index_of(0.25), 1);
        assert_eq!(t.index_of(0.74), 1);
        assert_eq!(t.index_of(0.75), 2);
    }

    #[test]
    fn zero_weight_bins_are_never_drawn() {
        let t = CumulativeTable::from_weights(&[0.0, 1.0, 0.0]);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            assert_eq!(t.sample(&mut rng), 1);
        }
    }

    #[test]
    fn mix64_and_node_seed_are_stable() {
        // Frozen values; a change here breaks every seeded run.
        assert_eq!(mix64(0), 0xe220a8397b1dcdaf);
        assert_eq!(node_seed(42, 0), node_seed(42, 0));
        assert_ne!(node_seed(42, 0), node_seed(42, 1));
        assert_ne!(node_seed(42, 0), node_seed(43, 0));
    }

    #[test]
    fn fnv_distinguishes_inputs() {
        assert_ne!(fnv1a64(b"a"), fnv1a64(b"b"));
        assert_eq!(fnv1a64(b""), 0xcbf29ce484222325);
    }
}
