use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gyrator::optimizer::{sweep_mu, OptimizerConfig};
use gyrator::simulator::{simulate_ensemble, ControlSchedule};
use gyrator::{Execution, SymMat2, ThermoParams};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn ensemble(c: &mut Criterion) {
    let params = ThermoParams::nondimensional(0.01).with_tf(1.0);
    let schedule = ControlSchedule::static_gain(SymMat2::new(1.0, 0.5, 1.0), &params, 100).unwrap();
    let mut group = c.benchmark_group("simulate_ensemble");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| simulate_ensemble(black_box(&schedule), 4000, 1e-3, 1, exec).unwrap())
        });
    }
    group.finish();
}

fn sweep(c: &mut Criterion) {
    let cfg = OptimizerConfig { n_points: 64, ..Default::default() };
    let mus: Vec<f64> = (0..4).map(|k| 0.01 + 0.005 * k as f64).collect();
    let mut group = c.benchmark_group("sweep_mu");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| sweep_mu(black_box(&mus), &cfg, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, ensemble, sweep);
criterion_main!(benches);
