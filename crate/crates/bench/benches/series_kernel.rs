use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use eqmf::eisenstein::{delta, eisenstein, DeltaRoute};
use eqmf_bench::KERNEL_ORDERS;

fn bench_mul(c: &mut Criterion) {
    let mut group = c.benchmark_group("mul");
    for order in KERNEL_ORDERS {
        let e4 = eisenstein(4, order).unwrap();
        let e6 = eisenstein(6, order).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(order), &order, |b, _| {
            b.iter(|| black_box(&e4 * &e6))
        });
    }
    group.finish();
}

fn bench_invert(c: &mut Criterion) {
    let mut group = c.benchmark_group("invert");
    for order in KERNEL_ORDERS {
        let e4 = eisenstein(4, order).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(order), &order, |b, _| {
            b.iter(|| black_box(e4.inverted().unwrap()))
        });
    }
    group.finish();
}

fn bench_sqrt(c: &mut Criterion) {
    let mut group = c.benchmark_group("sqrt");
    for order in KERNEL_ORDERS {
        let d = delta(order, DeltaRoute::Polynomial);
        group.bench_with_input(BenchmarkId::from_parameter(order), &order, |b, _| {
            b.iter(|| black_box(d.sqrt().unwrap()))
        });
    }
    group.finish();
}

fn bench_delta_routes(c: &mut Criterion) {
    let mut group = c.benchmark_group("delta");
    group.sample_size(20);
    for route in [DeltaRoute::Product, DeltaRoute::Polynomial] {
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("{route:?}")),
            &route,
            |b, &route| b.iter(|| black_box(delta(100, route))),
        );
    }
    group.finish();
}

criterion_group!(benches, bench_mul, bench_invert, bench_sqrt, bench_delta_routes);
criterion_main!(benches);
