use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use torext::cocycles::{tau1, virasoro_bott};
use torext::gauge::gauge_cocycle_gl;
use torext::verify::generate::Gen;
use torext::GridSpec;

fn multiply(c: &mut Criterion) {
    let mut group = c.benchmark_group("multiply");
    for degree in [8, 12, 16] {
        let spec = GridSpec::new(2, degree).unwrap();
        let mut full = Gen::new(1, degree);
        let (a, b) = (full.scalar(spec, 1.0), full.scalar(spec, 1.0));
        group.bench_with_input(BenchmarkId::new("full", degree), &degree, |bch, _| {
            bch.iter(|| black_box(a.multiply(&b).unwrap()))
        });
        let mut limited = Gen::new(1, degree / 4);
        let (a, b) = (limited.scalar(spec, 1.0), limited.scalar(spec, 1.0));
        group.bench_with_input(BenchmarkId::new("band-limited", degree), &degree, |bch, _| {
            bch.iter(|| black_box(a.multiply(&b).unwrap()))
        });
    }
    group.finish();
}

fn diffeo(c: &mut Criterion) {
    let spec = GridSpec::new(2, 12).unwrap();
    let mut g = Gen::new(2, 3);
    let f = g.diffeo(spec, 0.05).unwrap();
    let h = g.diffeo(spec, 0.05).unwrap();
    c.bench_function("compose/N2-D12", |b| b.iter(|| black_box(f.compose(&h).unwrap())));
    c.bench_function("inverse/N2-D12", |b| b.iter(|| black_box(f.inverse().unwrap())));
    let v = g.vector_smooth(spec, 0.2);
    c.bench_function("flow/N2-D12-t0.1", |b| b.iter(|| black_box(v.flow(0.1).unwrap())));
}

fn cocycles(c: &mut Criterion) {
    let spec = GridSpec::new(2, 12).unwrap();
    let mut g = Gen::new(3, 3);
    let f = g.gauge(spec, 0.3).unwrap();
    let h = g.gauge(spec, 0.3).unwrap();
    c.bench_function("gauge_cocycle_gl/N2-D12", |b| b.iter(|| black_box(gauge_cocycle_gl(&f, &h).unwrap())));
    let v = g.vector_smooth(spec, 0.2);
    let w = g.vector_smooth(spec, 0.2);
    c.bench_function("tau1/N2-D12", |b| b.iter(|| black_box(tau1(&v, &w).unwrap())));
    let circle = GridSpec::new(1, 12).unwrap();
    let p = g.diffeo(circle, 0.05).unwrap();
    let q = g.diffeo(circle, 0.05).unwrap();
    c.bench_function("virasoro_bott/D12", |b| b.iter(|| black_box(virasoro_bott(&p, &q).unwrap())));
}

criterion_group!(benches, multiply, diffeo, cocycles);
criterion_main!(benches);
