use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use eqmf::depth1::{normalized_depth1_with, recommended_cache_order, Route};
use eqmf::qm_space::extremal_solve;
use eqmf_bench::cache_at;

fn bench_depth1_routes(c: &mut Criterion) {
    let weight = 60;
    let order = 30;
    let cache = cache_at(recommended_cache_order(weight, order));
    let mut group = c.benchmark_group("depth1_weight_60");
    group.sample_size(10);
    for route in Route::ALL {
        group.bench_with_input(BenchmarkId::from_parameter(route), &route, |b, &route| {
            b.iter(|| black_box(normalized_depth1_with(&cache, weight, order, route).unwrap()))
        });
    }
    group.finish();
}

fn bench_extremal_solver(c: &mut Criterion) {
    let mut group = c.benchmark_group("extremal_solve");
    group.sample_size(10);
    for (depth, weight) in [(2i64, 40i64), (4, 40), (4, 60)] {
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("d{depth}_w{weight}")),
            &(depth, weight),
            |b, &(depth, weight)| b.iter(|| black_box(extremal_solve(depth, weight, 40).unwrap())),
        );
    }
    group.finish();
}

criterion_group!(benches, bench_depth1_routes, bench_extremal_solver);
criterion_main!(benches);
