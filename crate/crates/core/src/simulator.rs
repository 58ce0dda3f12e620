//! Full-run orchestration: drive a trace through the overlay engine, collect
//! per-interval series and snapshots, and fan out parameter sweeps.

use std::collections::HashSet;
use std::time::{Duration, Instant};

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::overlay::{IntervalStats, OverlayConfig, OverlayEngine, OverlaySnapshot};
use crate::sampling::{fnv1a64, mix64};
use crate::trace::ContactTrace;

/// Everything a run needs besides the trace itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub overlay: OverlayConfig,
    pub seed: u64,
    /// Intervals to snapshot in addition to the final state; empty means
    /// final-only.
    #[serde(default)]
    pub snapshot_at: Vec<u32>,
}

impl RunConfig {
    pub fn new(overlay: OverlayConfig, seed: u64) -> Self {
        Self {
            overlay,
            seed,
            snapshot_at: Vec::new(),
        }
    }
}

/// Output of one run. Serialization skips the wall time so that identical
/// inputs serialize identically.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunResult {
    pub config: RunConfig,
    pub series: Vec<IntervalStats>,
    /// Snapshots requested via `snapshot_at`, ascending by interval.
    pub snapshots: Vec<OverlaySnapshot>,
    pub final_snapshot: OverlaySnapshot,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl RunResult {
    pub fn total_adds(&self) -> u64 {
        self.series.iter().map(|s| s.adds).sum()
    }

    pub fn total_expiries(&self) -> u64 {
        self.series.iter().map(|s| s.expiries).sum()
    }

    pub fn total_replacements(&self) -> u64 {
        self.series.iter().map(|s| s.replacements).sum()
    }

    pub fn final_edge_count(&self) -> usize {
        self.final_snapshot.edge_count()
    }

    /// Mean out-degree over active nodes in the final snapshot.
    pub fn final_mean_degree(&self) -> f64 {
        if self.final_snapshot.nodes.is_empty() {
            return 0.0;
        }
        self.final_snapshot.edge_count() as f64 / self.final_snapshot.node_count() as f64
    }
}

/// Executes the link-management algorithm over the whole trace, interval by
/// interval. Deterministic in `(trace, config)`.
pub fn run(trace: &ContactTrace, config: &RunConfig) -> Result<RunResult> {
    config.overlay.validate()?;
    for &t in &config.snapshot_at {
        if t >= trace.num_intervals() {
            return Err(Error::SnapshotOutOfRange {
                interval: t,
                num_intervals: trace.num_intervals(),
            });
        }
    }
    let wanted: HashSet<u32> = config.snapshot_at.iter().copied().collect();

    let start = Instant::now();
    let mut engine = OverlayEngine::new(&config.overlay, trace.num_nodes(), config.seed)?;
    let mut series = Vec::with_capacity(trace.num_intervals() as usize);
    let mut snapshots = Vec::new();
    for t in 0..trace.num_intervals() {
        series.push(engine.step(t, trace.interval_events(t))?);
        if wanted.contains(&t) {
            snapshots.push(engine.snapshot());
        }
    }
    Ok(RunResult {
        config: config.clone(),
        series,
        snapshots,
        final_snapshot: engine.snapshot(),
        wall_time: start.elapsed(),
    })
}

/// Parameter grid of a sweep. Empty dimensions fall back to the base
/// config's value.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    #[serde(default)]
    pub delta: Vec<u32>,
    #[serde(default)]
    pub c_min: Vec<u32>,
    #[serde(default)]
    pub omega: Vec<f64>,
    #[serde(default)]
    pub lambda: Vec<f64>,
    #[serde(default)]
    pub d_min: Vec<u32>,
    #[serde(default)]
    pub d_max: Vec<u32>,
}

impl SweepGrid {
    /// Cartesian product in a fixed order (delta outermost, d_max innermost).
    pub fn points(&self, base: &OverlayConfig) -> Vec<OverlayConfig> {
        fn or_base<T: Copy>(values: &[T], base: T) -> Vec<T> {
            if values.is_empty() {
                vec![base]
            } else {
                values.to_vec()
            }
        }
        let deltas = or_base(&self.delta, base.delta);
        let c_mins = or_base(&self.c_min, base.c_min);
        let omegas = or_base(&self.omega, base.omega);
        let lambdas = or_base(&self.lambda, base.lambda);
        let d_mins = or_base(&self.d_min, base.d_min);
        let d_maxs = or_base(&self.d_max, base.d_max);

        let mut out = Vec::new();
        for &delta in &deltas {
            for &c_min in &c_mins {
                for &omega in &omegas {
                    for &lambda in &lambdas {
                        for &d_min in &d_mins {
                            for &d_max in &d_maxs {
                                out.push(OverlayConfig {
                                    delta,
                                    c_min,
                                    omega,
                                    lambda,
                                    d_min,
                                    d_max,
                                });
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// Seed of a sweep point, derived from the base seed and the point's own
/// parameters only, so a point's result never depends on the grid around it.
pub fn point_seed(base_seed: u64, overlay: &OverlayConfig) -> u64 {
    let mut bytes = Vec::with_capacity(32);
    bytes.extend_from_slice(&overlay.delta.to_le_bytes());
    bytes.extend_from_slice(&overlay.c_min.to_le_bytes());
    bytes.extend_from_slice(&overlay.omega.to_bits().to_le_bytes());
    bytes.extend_from_slice(&overlay.lambda.to_bits().to_le_bytes());
    bytes.extend_from_slice(&overlay.d_min.to_le_bytes());
    bytes.extend_from_slice(&overlay.d_max.to_le_bytes());
    mix64(base_seed ^ fnv1a64(&bytes))
}

/// The standalone [`RunConfig`] equivalent of one sweep point.
pub fn point_config(base: &RunConfig, overlay: OverlayConfig) -> RunConfig {
    RunConfig {
        seed: point_seed(base.seed, &overlay),
        overlay,
        snapshot_at: base.snapshot_at.clone(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub config: RunConfig,
    pub result: RunResult,
}

/// All sweep results in grid order plus the combinations that were skipped
/// as invalid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepOutcome {
    pub points: Vec<SweepPoint>,
    pub skipped: Vec<(OverlayConfig, String)>,
}

fn partition_grid(
    base: &RunConfig,
    grid: &SweepGrid,
) -> (Vec<RunConfig>, Vec<(OverlayConfig, String)>) {
    let mut configs = Vec::new();
    let mut skipped = Vec::new();
    for overlay in grid.points(&base.overlay) {
        match overlay.validate() {
            Ok(_) => configs.push(point_config(base, overlay)),
            Err(err) => {
                log::warn!("skipping sweep point {overlay:?}: {err}");
                skipped.push((overlay, err.to_string()));
            }
        }
    }
    (configs, skipped)
}

/// Runs every valid grid point sequentially, in grid order.
pub fn run_sweep(trace: &ContactTrace, base: &RunConfig, grid: &SweepGrid) -> Result<SweepOutcome> {
    let (configs, skipped) = partition_grid(base, grid);
    let mut points = Vec::with_capacity(configs.len());
    for config in configs {
        let result = run(trace, &config)?;
        points.push(SweepPoint { config, result });
    }
    Ok(SweepOutcome { points, skipped })
}

/// Runs grid points concurrently on the current rayon pool. Point results
/// are independent, so the outcome is identical to [`run_sweep`].
#[cfg(feature = "parallel")]
pub fn par_run_sweep(
    trace: &ContactTrace,
    base: &RunConfig,
    grid: &SweepGrid,
) -> Result<SweepOutcome> {
    let (configs, skipped) = partition_grid(base, grid);
    let points = configs
        .into_par_iter()
        .map(|config| {
            let result = run(trace, &config)?;
            Ok(SweepPoint { config, result })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepOutcome { points, skipped })
}

/// Sweep entry point with an explicit parallelism degree: `1` forces the
/// sequential path, `0` uses all cores, anything else a dedicated pool of
/// that size. Without the `parallel` feature every value runs sequentially.
pub fn run_sweep_jobs(
    trace: &ContactTrace,
    base: &RunConfig,
    grid: &SweepGrid,
    jobs: usize,
) -> Result<SweepOutcome> {
    #[cfg(feature = "parallel")]
    {
        match jobs {
            1 => run_sweep(trace, base, grid),
            0 => par_run_sweep(trace, base, grid),
            n => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
                pool.install(|| par_run_sweep(trace, base, grid))
            }
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        if jobs != 1 {
            log::warn!("built without the `parallel` feature; running sweep sequentially");
        }
        run_sweep(trace, base, grid)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace::{generate_synthetic, SyntheticParams};

    fn small_trace() -> ContactTrace {
        generate_synthetic(
            &SyntheticParams {
                num_nodes: 40,
                num_intervals: 25,
                events_per_interval: 30,
                activity_shape: 1.5,
            },
            123,
        )
        .unwrap()
    }

    #[test]
    fn zero_interval_trace_yields_empty_result() {
        let trace = ContactTrace::from_events(3, 0, vec![]).unwrap();
        let config = RunConfig::new(OverlayConfig::default(), 1);
        let result = run(&trace, &config).unwrap();
        assert!(result.series.is_empty());
        assert_eq!(result.final_snapshot.node_count(), 0);
        assert_eq!(result.final_snapshot.edge_count(), 0);
    }

    #[test]
    fn identical_inputs_identical_serializations() {
        let trace = small_trace();
        let config = RunConfig::new(OverlayConfig::default(), 7);
        let a = run(&trace, &config).unwrap();
        let b = run(&trace, &config).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn series_balance_matches_final_edges() {
        let trace = small_trace();
        let config = RunConfig::new(OverlayConfig::default(), 3);
        let r = run(&trace, &config).unwrap();
        let balance = r.total_adds() as i64 - r.total_expiries() as i64
            - r.total_replacements() as i64;
        assert_eq!(balance, r.final_edge_count() as i64);
        assert_eq!(r.series.len(), trace.num_intervals() as usize);
    }

    #[test]
    fn snapshot_out_of_range_rejected() {
        let trace = small_trace();
        let mut config = RunConfig::new(OverlayConfig::default(), 3);
        config.snapshot_at = vec![trace.num_intervals()];
        assert!(matches!(
            run(&trace, &config),
            Err(Error::SnapshotOutOfRange { .. })
        ));
    }

    #[test]
    fn requested_snapshots_are_collected() {
        let trace = small_trace();
        let mut config = RunConfig::new(OverlayConfig::default(), 3);
        config.snapshot_at = vec![0, 10];
        let r = run(&trace, &config).unwrap();
        assert_eq!(r.snapshots.len(), 2);
        assert_eq!(r.snapshots[0].interval, 0);
        assert_eq!(r.snapshots[1].interval, 10);
    }

    #[test]
    fn single_point_sweep_equals_standalone_run() {
        let trace = small_trace();
        let base = RunConfig::new(OverlayConfig::default(), 11);
        let grid = SweepGrid {
            delta: vec![3],
            ..SweepGrid::default()
        };
        let outcome = run_sweep(&trace, &base, &grid).unwrap();
        assert_eq!(outcome.points.len(), 1);
        assert!(outcome.skipped.is_empty());

        let overlay = OverlayConfig {
            delta: 3,
            ..base.overlay.clone()
        };
        let standalone = run(&trace, &point_config(&base, overlay)).unwrap();
        assert_eq!(
            serde_json::to_string(&outcome.points[0].result).unwrap(),
            serde_json::to_string(&standalone).unwrap()
        );
    }

    #[test]
    fn invalid_combinations_are_skipped() {
        let trace = small_trace();
        let base = RunConfig::new(OverlayConfig::default(), 11);
        let grid = SweepGrid {
            d_min: vec![5, 200],
            d_max: vec![100],
            ..SweepGrid::default()
        };
        let outcome = run_sweep(&trace, &base, &grid).unwrap();
        assert_eq!(outcome.points.len(), 1);
        assert_eq!(outcome.skipped.len(), 1);
        assert_eq!(outcome.skipped[0].0.d_min, 200);
    }

    #[test]
    fn point_seed_ignores_grid_shape() {
        let overlay = OverlayConfig::default();
        let a = point_seed(9, &overlay);
        let b = point_seed(9, &overlay);
        assert_eq!(a, b);
        let other = OverlayConfig {
            delta: 9,
            ..overlay.clone()
        };
        assert_ne!(point_seed(9, &other), a);
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_sweep_matches_sequential() {
        let trace = small_trace();
        let base = RunConfig::new(OverlayConfig::default(), 5);
        let grid = SweepGrid {
            delta: vec![1, 3],
            omega: vec![0.0, 0.5],
            ..SweepGrid::default()
        };
        let seq = run_sweep(&trace, &base, &grid).unwrap();
        let par = par_run_sweep(&trace, &base, &grid).unwrap();
        assert_eq!(
            serde_json::to_string(&seq).unwrap(),
            serde_json::to_string(&par).unwrap()
        );
        let jobs2 = run_sweep_jobs(&trace, &base, &grid, 2).unwrap();
        assert_eq!(
            serde_json::to_string(&seq).unwrap(),
            serde_json::to_string(&jobs2).unwrap()
        );
    }
}
