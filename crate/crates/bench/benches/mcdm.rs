use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use fogbal_bench::{decision_matrix, reference_weights};
use fogbal_core::fuzzy::{consistency_ratio, fahp_weights, ftopsis_rank, PairwiseComparisonMatrix};

fn fahp(c: &mut Criterion) {
    let m = PairwiseComparisonMatrix::fog_device_criteria();
    c.bench_function("fahp_weights/6", |b| {
        b.iter(|| fahp_weights(black_box(&m)).unwrap())
    });
    c.bench_function("consistency_ratio/6", |b| {
        b.iter(|| consistency_ratio(black_box(&m)).unwrap())
    });
}

fn ftopsis(c: &mut Criterion) {
    let w = reference_weights();
    let mut g = c.benchmark_group("ftopsis_rank");
    for n in [5, 25, 100] {
        let dm = decision_matrix(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &dm, |b, dm| {
            b.iter(|| ftopsis_rank(black_box(dm), &w).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, fahp, ftopsis);
criterion_main!(benches);
