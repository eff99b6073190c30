use bianchi_bench::{context, unit_box, FIELDS};
use bianchi_core::qe::mu_measure;
use bianchi_core::special_functions::{bessel_k, bessel_k_weighted_fast};
use bianchi_core::{ClassGroup, LContext, QuadField};
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;

fn bessel(c: &mut Criterion) {
    let mut g = c.benchmark_group("bessel_k");
    for t in [1.0, 20.0, 100.0] {
        let nu = Complex64::new(0.0, t);
        g.bench_with_input(BenchmarkId::new("accurate", t), &nu, |b, &nu| b.iter(|| bessel_k(nu, black_box(t * 0.8 + 1.0))));
        g.bench_with_input(BenchmarkId::new("fast", t), &nu, |b, &nu| b.iter(|| bessel_k_weighted_fast(nu, black_box(t * 0.8 + 1.0))));
    }
    g.finish();
}

fn class_groups(c: &mut Criterion) {
    let mut g = c.benchmark_group("class_group");
    for d in FIELDS {
        let f = QuadField::new(d).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(d), &f, |b, f| b.iter(|| ClassGroup::new(f).unwrap()));
    }
    g.finish();
}

fn hecke(c: &mut Criterion) {
    let mut g = c.benchmark_group("hecke_l");
    let l = LContext::new(&QuadField::new(-23).unwrap()).unwrap();
    for s in [Complex64::new(2.5, 0.0), Complex64::new(0.5, 14.0), Complex64::new(1.0, 60.0)] {
        g.bench_with_input(BenchmarkId::from_parameter(s), &s, |b, &s| b.iter(|| l.hecke_l(1, s).unwrap()));
    }
    g.finish();
}

fn fourier(c: &mut Criterion) {
    let e = context(-5);
    let s = Complex64::new(1.0, 10.0);
    // warm the coefficient cache so only evaluation is timed
    e.fourier_eval(0, 1, Complex64::new(0.1, 0.2), 1.0, s, 1e-10).unwrap();
    c.bench_function("fourier_eval/d=-5,t=10", |b| {
        b.iter(|| e.fourier_eval(0, 1, black_box(Complex64::new(0.1, 0.2)), 1.0, s, 1e-10).unwrap())
    });
}

fn mu(c: &mut Criterion) {
    let e = context(-5);
    let bx = unit_box();
    let mut g = c.benchmark_group("mu_measure");
    g.sample_size(10);
    for t in [10.0, 20.0] {
        g.bench_with_input(BenchmarkId::from_parameter(t), &t, |b, &t| b.iter(|| mu_measure(&e, &bx, t, 0, 24, 1e-8).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, bessel, class_groups, hecke, fourier, mu);
criterion_main!(benches);
