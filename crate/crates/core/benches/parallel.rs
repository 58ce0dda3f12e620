//! Sequential vs. rayon-parallel comparison for the data-parallel paths:
//! sweep execution and multi-source BFS diameter estimation.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use oppnet_core::analytics::{estimate_diameter, par_estimate_diameter};
use oppnet_core::overlay::OverlayConfig;
use oppnet_core::simulator::{par_run_sweep, run, run_sweep, RunConfig, SweepGrid};
use oppnet_core::trace::{generate_synthetic, ContactTrace, SyntheticParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn bench_trace() -> ContactTrace {
    generate_synthetic(
        &SyntheticParams {
            num_nodes: 600,
            num_intervals: 60,
            events_per_interval: 900,
            activity_shape: 1.5,
        },
        17,
    )
    .unwrap()
}

fn sweep(c: &mut Criterion) {
    let trace = bench_trace();
    let base = RunConfig::new(OverlayConfig::default(), 17);
    let grid = SweepGrid {
        delta: vec![1, 5, 10],
        omega: vec![0.0, 0.25],
        ..SweepGrid::default()
    };

    let mut group = c.benchmark_group("sweep_6pt");
    group.sample_size(10);
    group.bench_function("serial", |b| {
        b.iter(|| black_box(run_sweep(&trace, &base, &grid).unwrap()))
    });
    group.bench_function("parallel", |b| {
        b.iter(|| black_box(par_run_sweep(&trace, &base, &grid).unwrap()))
    });
    group.finish();
}

fn diameter(c: &mut Criterion) {
    let trace = bench_trace();
    let base = RunConfig::new(OverlayConfig::default(), 17);
    let snapshot = run(&trace, &base).unwrap().final_snapshot;
    let sources = 128usize;

    let mut group = c.benchmark_group("diameter_128src");
    group.sample_size(20);
    group.bench_function("serial", |b| {
        b.iter(|| {
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            black_box(estimate_diameter(&snapshot, sources, &mut rng).unwrap())
        })
    });
    group.bench_function("parallel", |b| {
        b.iter(|| {
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            black_box(par_estimate_diameter(&snapshot, sources, &mut rng).unwrap())
        })
    });
    group.finish();
}

criterion_group!(benches, sweep, diameter);
criterion_main!(benches);
