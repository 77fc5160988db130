use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use schwartzkit::factorize::{default_seminorms, strong_factorize, BoundPolicy};
use schwartzkit::gridfn::{convolve, fourier_transform};
use schwartzkit::hadamard::{reciprocal_product_grid, ZeroSequence};
use schwartzkit_bench::gaussian;

fn transform(c: &mut Criterion) {
    let mut group = c.benchmark_group("fourier_transform");
    for n in [1024, 8192, 65536] {
        let f = gaussian(32.0, n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &f, |b, f| {
            b.iter(|| fourier_transform(black_box(f)))
        });
    }
    group.finish();
}

fn convolution(c: &mut Criterion) {
    let mut group = c.benchmark_group("convolve");
    for n in [1024, 8192, 65536] {
        let f = gaussian(32.0, n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &f, |b, f| {
            b.iter(|| convolve(black_box(f), black_box(f)).unwrap())
        });
    }
    group.finish();
}

fn reciprocal_product(c: &mut Criterion) {
    let zeros = ZeroSequence::linear(std::f64::consts::PI, 2000).unwrap();
    let mut group = c.benchmark_group("reciprocal_product_grid");
    for n in [1024, 8192] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| reciprocal_product_grid(black_box(&zeros), 24.0, n).unwrap())
        });
    }
    group.finish();
}

fn factorization(c: &mut Criterion) {
    let phi = gaussian(16.0, 2048);
    let seminorms = default_seminorms();
    c.bench_function("strong_factorize/J6", |b| {
        b.iter(|| strong_factorize(black_box(&phi), 6, 6, &BoundPolicy::Diagonal, &seminorms).unwrap())
    });
}

criterion_group!(benches, transform, convolution, reciprocal_product, factorization);
criterion_main!(benches);
