use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use lqlab_bench::{gaussian_batch, point_cloud};
use lqlab_core::chaining::{build_admissible_sequence, gamma2_upper_dudley, ChainMetric};
use lqlab_core::ensembles::sample_batch;
use lqlab_core::index_sets::{epsilon_net_with, NetMetric, NetOptions};
use lqlab_core::process::{search_sup, Population, SearchOptions};
use lqlab_core::{EnsembleSpec, IndexSet, ProcessConfig};

fn sampling(c: &mut Criterion) {
    let mut g = c.benchmark_group("sample_batch");
    for n in [256usize, 4096] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| sample_batch(&EnsembleSpec::gaussian(16), black_box(n), 1).unwrap())
        });
    }
    g.finish();
}

fn nets(c: &mut Criterion) {
    let set = IndexSet::sphere(8, 1.0);
    let opts = NetOptions {
        max_points: 256,
        ..NetOptions::default()
    };
    c.bench_function("epsilon_net sphere d=8", |b| {
        b.iter(|| epsilon_net_with(&set, black_box(0.5), NetMetric::L2, 3, opts).unwrap())
    });
}

fn chaining(c: &mut Criterion) {
    let points = point_cloud(512, 6, 5);
    c.bench_function("admissible_sequence 512 points", |b| {
        b.iter(|| build_admissible_sequence(black_box(&points), 4, ChainMetric::L2).unwrap())
    });
    let set = IndexSet::l1_ball(32, 1.0);
    c.bench_function("gamma2_dudley l1 d=32", |b| {
        b.iter(|| gamma2_upper_dudley(black_box(&set), ChainMetric::L2, 20).unwrap())
    });
}

fn sup_search(c: &mut Criterion) {
    let mut g = c.benchmark_group("search_sup");
    g.sample_size(20);
    for q in [1.0, 2.0, 4.0] {
        let mut cfg = ProcessConfig::new(IndexSet::sphere(8, 1.0), EnsembleSpec::gaussian(8), q, 256);
        cfg.net_max_points = 128;
        let net = cfg.build_net().unwrap();
        let batch = gaussian_batch(8, 256, 9);
        let pop = Population::for_ensemble(&cfg.ensemble, q, 256, 9).unwrap();
        let opts = SearchOptions {
            restarts: 4,
            steps: 60,
        };
        g.bench_with_input(BenchmarkId::from_parameter(q), &q, |b, &q| {
            b.iter(|| search_sup(&batch, &cfg.set, net.as_ref(), q, &pop, opts).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, sampling, nets, chaining, sup_search);
criterion_main!(benches);
