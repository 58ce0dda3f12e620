//! Truncated power-law degree distribution.

use rand::Rng;

use super::OverlayConfig;
use crate::sampling::CumulativeTable;

/// Probability that the target distribution assigns to degree `d`:
/// `d^-lambda / Z` over the support `[d_min, d_max]`, 0 outside it.
pub fn degree_pmf(config: &OverlayConfig, d: u32) -> f64 {
    if d < config.d_min || d > config.d_max {
        return 0.0;
    }
    let z: f64 = (config.d_min..=config.d_max)
        .map(|k| f64::from(k).powf(-config.lambda))
        .sum();
    f64::from(d).powf(-config.lambda) / z
}

/// Inverse-CDF sampler over the desired-degree pmf.
///
/// The cumulative table is the running sum of `d^-lambda` divided by its
/// total; a uniform draw maps to the smallest degree whose cumulative value
/// exceeds it.
#[derive(Debug, Clone)]
pub struct DegreeSampler {
    d_min: u32,
    pmf: Vec<f64>,
    table: CumulativeTable,
}

impl DegreeSampler {
    pub fn new(config: &OverlayConfig) -> Self {
        let weights: Vec<f64> = (config.d_min..=config.d_max)
            .map(|k| f64::from(k).powf(-config.lambda))
            .collect();
        let total: f64 = weights.iter().sum();
        let pmf = weights.iter().map(|w| w / total).collect();
        Self {
            d_min: config.d_min,
            pmf,
            table: CumulativeTable::from_weights(&weights),
        }
    }

    pub fn d_min(&self) -> u32 {
        self.d_min
    }

    pub fn d_max(&self) -> u32 {
        self.d_min + self.pmf.len() as u32 - 1
    }

    /// Same values as [`degree_pmf`], precomputed.
    pub fn pmf(&self, d: u32) -> f64 {
        if d < self.d_min {
            return 0.0;
        }
        self.pmf.get((d - self.d_min) as usize).copied().unwrap_or(0.0)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        self.d_min + self.table.sample(rng) as u32
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn config(d_min: u32, d_max: u32, lambda: f64) -> OverlayConfig {
        OverlayConfig {
            d_min,
            d_max,
            lambda,
            ..OverlayConfig::default()
        }
    }

    #[test]
    fn single_point_support() {
        let cfg = config(7, 7, 2.5);
        assert_eq!(degree_pmf(&cfg, 7), 1.0);
        assert_eq!(degree_pmf(&cfg, 6), 0.0);
        assert_eq!(degree_pmf(&cfg, 8), 0.0);
        let sampler = DegreeSampler::new(&cfg);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..100 {
            assert_eq!(sampler.sample(&mut rng), 7);
        }
    }

    #[test]
    fn pmf_sums_to_one() {
        for (lo, hi, lambda) in [(5, 100, 2.5), (1, 10, 2.0), (10, 1000, 3.0)] {
            let cfg = config(lo, hi, lambda);
            let sum: f64 = (lo..=hi).map(|d| degree_pmf(&cfg, d)).sum();
            assert!((sum - 1.0).abs() <= 1e-12, "sum {sum} for {lo}..{hi}");
        }
    }

    #[test]
    fn pmf_matches_direct_summation() {
        // Oracle: independent normalization sum.
        let cfg = config(5, 100, 2.5);
        let mut z = 0.0f64;
        for k in 5..=100u32 {
            z += f64::from(k).powf(-2.5);
        }
        let expected = f64::from(5u32).powf(-2.5) / z;
        assert!((degree_pmf(&cfg, 5) - expected).abs() < 1e-15);
        assert!((expected - 0.26).abs() < 5e-3, "pmf(5) should be near 0.26");
        let sampler = DegreeSampler::new(&cfg);
        assert!((sampler.pmf(5) - expected).abs() < 1e-15);
    }

    #[test]
    fn loglog_pmf_is_linear_with_slope_minus_lambda() {
        let cfg = config(5, 100, 2.5);
        let p5 = degree_pmf(&cfg, 5).log10();
        for d in [7u32, 13, 42, 100] {
            let slope =
                (degree_pmf(&cfg, d).log10() - p5) / (f64::from(d).log10() - 5f64.log10());
            assert!((slope + 2.5).abs() < 1e-12, "slope {slope} at d={d}");
        }
    }

    #[test]
    fn sampling_is_reproducible() {
        let sampler = DegreeSampler::new(&config(5, 100, 2.5));
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..50).map(|_| sampler.sample(&mut rng)).collect::<Vec<_>>()
        };
        assert_eq!(draw(11), draw(11));
        assert_ne!(draw(11), draw(12));
    }

    #[test]
    fn empirical_frequencies_track_pmf() {
        let cfg = config(5, 100, 2.5);
        let sampler = DegreeSampler::new(&cfg);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 200_000usize;
        let mut counts = vec![0u64; 101];
        for _ in 0..n {
            counts[sampler.sample(&mut rng) as usize] += 1;
        }
        let tv: f64 = (5..=100u32)
            .map(|d| (counts[d as usize] as f64 / n as f64 - degree_pmf(&cfg, d)).abs())
            .sum::<f64>()
            / 2.0;
        assert!(tv <= 0.01, "total variation distance {tv}");
    }
}
