use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use olct_bench::{gaussian, params};
use olct_core::gen::fixtures;
use olct_core::{
    boas_op_n, convolve_spectral, convolve_time, correlate, delta_op_n, demo_chirp_denoise, pw_bandwidth_estimate,
    CorrelationVariant, DemoConfig,
};

fn convolution(c: &mut Criterion) {
    let p = params();
    let mut group = c.benchmark_group("convolution");
    group.sample_size(10);
    for n in [256, 1024] {
        let (f, g) = (gaussian(n, 0.5), gaussian(n, -0.5));
        group.bench_with_input(BenchmarkId::new("time", n), &n, |b, _| b.iter(|| convolve_time(&p, black_box(&f), &g).unwrap()));
        group.bench_with_input(BenchmarkId::new("spectral", n), &n, |b, _| b.iter(|| convolve_spectral(&p, black_box(&f), &g).unwrap()));
    }
    let (f, g) = (gaussian(1024, 0.5), gaussian(1024, -0.5));
    group.bench_function("correlate_1024", |b| b.iter(|| correlate(&p, black_box(&f), &g, CorrelationVariant::AsPrinted).unwrap()));
    group.finish();
}

fn spectral_operators(c: &mut Criterion) {
    let p = params();
    let f = gaussian(4096, 0.0);
    c.bench_function("delta_n4_4096", |b| b.iter(|| delta_op_n(&p, black_box(&f), 4).unwrap()));
    c.bench_function("boas_n2_4096", |b| b.iter(|| boas_op_n(&p, black_box(&f), 2).unwrap()));
    let bl = fixtures::paley_wiener(&p, 2.0).unwrap();
    c.bench_function("pw_estimate_n16", |b| b.iter(|| pw_bandwidth_estimate(&p, black_box(&bl), 16).unwrap()));
}

fn demo(c: &mut Criterion) {
    let cfg = DemoConfig::new(params());
    c.bench_function("chirp_denoise_demo", |b| b.iter(|| demo_chirp_denoise(black_box(&cfg)).unwrap()));
}

criterion_group!(benches, convolution, spectral_operators, demo);
criterion_main!(benches);
