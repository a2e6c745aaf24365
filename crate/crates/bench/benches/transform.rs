use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use olct_bench::{gaussian, params};
use olct_core::{olct_direct, olct_fast, olct_inverse, OlctPlan};

fn fast_path(c: &mut Criterion) {
    let p = params();
    let mut group = c.benchmark_group("olct_fast");
    for log_n in [10, 12, 14, 16, 18, 20] {
        let n = 1usize << log_n;
        let f = gaussian(n, 0.0);
        group.throughput(Throughput::Elements(n as u64));
        group.bench_with_input(BenchmarkId::from_parameter(n), &f, |b, f| b.iter(|| olct_fast(&p, black_box(f)).unwrap()));
    }
    group.finish();
}

/// Building the plan once and reusing it, against planning on every call.
fn plan_reuse(c: &mut Criterion) {
    let p = params();
    let f = gaussian(4096, 0.0);
    let plan = OlctPlan::new(p, f.grid()).unwrap();
    let mut group = c.benchmark_group("plan_reuse_4096");
    group.bench_function("cached", |b| b.iter(|| plan.forward(black_box(&f)).unwrap()));
    group.bench_function("fresh", |b| b.iter(|| olct_fast(&p, black_box(&f)).unwrap()));
    group.finish();
}

fn round_trip(c: &mut Criterion) {
    let p = params();
    let f = gaussian(1 << 14, 0.0);
    c.bench_function("round_trip_16384", |b| b.iter(|| olct_inverse(&olct_fast(&p, black_box(&f)).unwrap()).unwrap()));
}

fn direct_oracle(c: &mut Criterion) {
    let p = params();
    let mut group = c.benchmark_group("olct_direct");
    group.sample_size(10);
    for n in [256, 1024, 4096] {
        let f = gaussian(n, 0.0);
        let grid = olct_fast(&p, &f).unwrap().grid();
        group.bench_with_input(BenchmarkId::from_parameter(n), &f, |b, f| b.iter(|| olct_direct(&p, black_box(f), &grid).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, fast_path, plan_reuse, round_trip, direct_oracle);
criterion_main!(benches);
