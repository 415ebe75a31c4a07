use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use mbqc_core::lab::calibrate_depolarizing;
use mbqc_core::runtime::corrected_distribution;
use mbqc_core::{build_cluster, deutsch_pattern, grover_pattern, sample_shots, Graph, OracleFunction, Tag};

fn cluster(c: &mut Criterion) {
    let path = Graph::path(6);
    let all = Graph::from_edge_mask(6, (1 << 15) - 1);
    c.bench_function("build_cluster path6", |b| b.iter(|| build_cluster(black_box(&path)).unwrap()));
    c.bench_function("build_cluster complete6", |b| b.iter(|| build_cluster(black_box(&all)).unwrap()));
}

fn patterns(c: &mut Criterion) {
    let p = grover_pattern(Tag(1, 1));
    c.bench_function("grover exhaustive", |b| b.iter(|| corrected_distribution(black_box(&p)).unwrap()));
    let d = deutsch_pattern(OracleFunction::F3);
    c.bench_function("deutsch 1000 shots", |b| b.iter(|| sample_shots(black_box(&d), 1000, 7).unwrap()));
}

fn witness(c: &mut Criterion) {
    let mut g = c.benchmark_group("witness");
    g.sample_size(10);
    g.bench_function("calibration scan step 0.01", |b| b.iter(|| calibrate_depolarizing(0.88, black_box(0.01)).unwrap()));
    g.finish();
}

criterion_group!(benches, cluster, patterns, witness);
criterion_main!(benches);
