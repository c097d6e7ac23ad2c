//! Benchmarks for the hot paths: symmetric products, contractions, system
//! construction, Wick convolution, and the triangular reorder maps.

use appell_bench::{gaussian_system, sample_kernel, sample_sequence};
use appell_core::appell::build_appell;
use appell_core::calculus::{reorder_monomial_to_p, reorder_p_to_monomial};
use appell_core::measure::{gaussian_measure, poisson_measure_1d};
use appell_core::wick::wick_product;
use appell_core::Complex64;
use criterion::{black_box, criterion_group, criterion_main, Criterion};

fn bench_sym_product(c: &mut Criterion) {
    let a = sample_kernel(3, 5);
    let b = sample_kernel(3, 5);
    c.bench_function("sym_product d3 deg5x5", |bench| {
        bench.iter(|| black_box(&a).sym_product(black_box(&b)).unwrap())
    });
}

fn bench_contract(c: &mut Criterion) {
    let probe = sample_kernel(3, 3);
    let target = sample_kernel(3, 8);
    c.bench_function("contract d3 deg3->8", |bench| {
        bench.iter(|| black_box(&probe).contract(black_box(&target)).unwrap())
    });
}

fn bench_build_appell(c: &mut Criterion) {
    let gauss = gaussian_measure(2, 10).unwrap();
    c.bench_function("build_appell gaussian d2 N10", |bench| {
        bench.iter(|| build_appell(black_box(&gauss), 10).unwrap())
    });
    let poisson = poisson_measure_1d(1.0, 16).unwrap();
    c.bench_function("build_appell poisson N16", |bench| {
        bench.iter(|| build_appell(black_box(&poisson), 16).unwrap())
    });
}

fn bench_p_kernel(c: &mut Criterion) {
    let sys = gaussian_system(2, 10);
    let x = [Complex64::new(0.7, 0.0), Complex64::new(-0.4, 0.0)];
    c.bench_function("p_kernel d2 n10", |bench| {
        bench.iter(|| sys.p_kernel(black_box(10), black_box(&x)).unwrap())
    });
}

fn bench_wick_product(c: &mut Criterion) {
    let a = sample_sequence(2, 8);
    let b = sample_sequence(2, 8);
    c.bench_function("wick_product d2 N8x8", |bench| {
        bench.iter(|| wick_product(black_box(&a), black_box(&b)).unwrap())
    });
}

fn bench_reorder(c: &mut Criterion) {
    let sys = gaussian_system(2, 10);
    let phi = sample_sequence(2, 10).retagged(appell_core::calculus::Basis::P, None);
    c.bench_function("reorder roundtrip d2 N10", |bench| {
        bench.iter(|| {
            let mono = reorder_p_to_monomial(black_box(&sys), black_box(&phi)).unwrap();
            reorder_monomial_to_p(&sys, &mono).unwrap()
        })
    });
}

criterion_group!(
    benches,
    bench_sym_product,
    bench_contract,
    bench_build_appell,
    bench_p_kernel,
    bench_wick_product,
    bench_reorder
);
criterion_main!(benches);
