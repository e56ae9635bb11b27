//! Sequential against data-parallel execution on the main exact workloads.

use c60_core::exec::Execution;
use c60_core::graph::buckyball;
use c60_core::green::{diagonal_samples, pseudo_green_with};
use c60_core::linalg::charpoly;
use c60_core::reference;
use c60_core::sobolev::{run_trials, Mode};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn exact(c: &mut Criterion) {
    let a = buckyball().laplacian();
    let mut group = c.benchmark_group("buckyball");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new("charpoly", name), &exec, |b, &exec| {
            b.iter(|| charpoly(&a, exec).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("pseudo_green", name), &exec, |b, &exec| {
            b.iter(|| pseudo_green_with(&a, exec).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("green_samples_8", name), &exec, |b, &exec| {
            b.iter(|| diagonal_samples(&a, 8, exec).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("sobolev_trials_200", name), &exec, |b, &exec| {
            b.iter(|| run_trials(&a, &reference::c0(), &Mode::MeanZero, 1, 200, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, exact);
criterion_main!(benches);
