use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use zerosum::analysis::trig_mean_square;
use zerosum::arith::representation_count;
use zerosum::explicit::goldbach_average;
use zerosum::expsum::{s_classical_poly, s_tilde};
use zerosum::special::{bessel_j, lattice_family, log_gamma, theta};
use zerosum::{build_sieve, Complex64, ComplexParam, ExpSumConfig, ProblemKind, QuadratureSpec, ZeroTable};

/// Evenly spread stand-in ordinates; only the count matters for timing.
fn fake_zeros(n: usize) -> ZeroTable {
    ZeroTable::from_ordinates((0..n).map(|j| 14.134725141734694 + 1.1 * j as f64).collect(), "bench").unwrap()
}

fn arith(c: &mut Criterion) {
    c.bench_function("build_sieve 1e6", |b| b.iter(|| build_sieve(black_box(1_000_000)).unwrap()));
    let sieve = build_sieve(100_000).unwrap();
    let mut g = c.benchmark_group("representation_count");
    for kind in [ProblemKind::Goldbach, ProblemKind::Hua, ProblemKind::TwoPrimeSquares] {
        g.bench_with_input(BenchmarkId::from_parameter(kind.tag()), &kind, |b, &k| {
            b.iter(|| representation_count(k, black_box(99_998), &sieve).unwrap())
        });
    }
    g.finish();
}

fn special(c: &mut Criterion) {
    let q = QuadratureSpec::default();
    c.bench_function("log_gamma rho", |b| {
        b.iter(|| log_gamma(black_box(Complex64::new(0.5, 5000.0))).unwrap())
    });
    c.bench_function("theta", |b| b.iter(|| theta(black_box(Complex64::new(0.01, 0.3))).unwrap()));
    let mut g = c.benchmark_group("bessel_j");
    for u in [5.0, 200.0] {
        g.bench_with_input(BenchmarkId::from_parameter(u), &u, |b, &u| {
            b.iter(|| bessel_j(black_box(Complex64::new(3.0, 14.13)), u, &q).unwrap())
        });
    }
    g.finish();
    c.bench_function("lattice_family 20", |b| {
        b.iter(|| lattice_family(black_box(Complex64::new(3.0, 14.13)), 198.7, 20, &q).unwrap())
    });
}

fn expsum(c: &mut Criterion) {
    let cfg = ExpSumConfig::new(1).unwrap();
    let sieve = build_sieve(cfg.n_max(10_000)).unwrap();
    let p = ComplexParam::segment(10_000, 0.0123).unwrap();
    c.bench_function("s_tilde N=1e4", |b| b.iter(|| s_tilde(&cfg, black_box(&p), &sieve).unwrap()));
    let poly = s_classical_poly(&cfg, 10_000, &sieve).unwrap();
    c.bench_function("trig_mean_square N=1e4", |b| b.iter(|| trig_mean_square(&poly, black_box(0.01))));
}

fn explicit(c: &mut Criterion) {
    let sieve = build_sieve(4096).unwrap();
    let zeros = fake_zeros(1000);
    c.bench_function("goldbach_average 1000 zeros", |b| {
        b.iter(|| goldbach_average(black_box(4096), zeros.view(), &sieve).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = arith, special, expsum, explicit
}
criterion_main!(benches);
