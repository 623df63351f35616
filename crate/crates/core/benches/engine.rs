//! Parallel against sequential execution on the three batch-shaped kernels.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use indexforms::chernweil::index::{zeta_index_sum_with, RescaledJets};
use indexforms::chernweil::{random_batch, Weights};
use indexforms::getzler::{full_level, q_table_with, ModelGeometry};
use indexforms::par::{map, Execution};
use indexforms::spectral::hurwitz_zeta;

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn recursion_table(c: &mut Criterion) {
    let mut group = c.benchmark_group("q_table");
    group.sample_size(10);
    for (n, k) in [(4usize, 4u32), (6, 3)] {
        let g = ModelGeometry::new(n, k).unwrap();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, format!("n{n}_K{k}")), &g, |b, g| {
                b.iter(|| q_table_with(g, full_level(g), exec))
            });
        }
    }
    group.finish();
}

fn index_sums(c: &mut Criterion) {
    let batch = random_batch(1000, 25).unwrap();
    let mut group = c.benchmark_group("zeta_index_sum");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| {
                map(exec, &batch, |inst| {
                    let a = &inst.superconnection;
                    let rj = RescaledJets::new(a, exec).unwrap();
                    zeta_index_sum_with(a, &rj, Weights::AlternatingFactorial, exec)
                        .unwrap()
                        .exact
                })
            })
        });
    }
    group.finish();
}

fn hurwitz_batch(c: &mut Criterion) {
    let points: Vec<(f64, f64)> = (0..4000)
        .map(|i| {
            (
                -15.0 + 30.0 * (i as f64 + 0.5) / 4000.0,
                0.05 + (i % 37) as f64 / 10.0,
            )
        })
        .collect();
    let mut group = c.benchmark_group("hurwitz_zeta");
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| map(exec, black_box(&points), |&(s, a)| hurwitz_zeta(s, a).ok()))
        });
    }
    group.finish();
}

criterion_group!(benches, recursion_table, index_sums, hurwitz_batch);
criterion_main!(benches);
