//! Timings for the hot kernels.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use boxgeo_core::algebra::spontaneous_checks;
use boxgeo_core::classifier::{classify, DEFAULT_BOUNDARY_TOL};
use boxgeo_core::oracle::mesh_geodesic;
use boxgeo_core::regions::{label_region, signature};
use boxgeo_core::{min_over_six, BoxDims, SurfacePoint};

fn distances(c: &mut Criterion) {
    let d = BoxDims::new(1.0, 2.5).unwrap();
    let p = SurfacePoint::new(&d, 0.0, 5.0 / 12.0).unwrap();
    c.bench_function("min_over_six", |b| b.iter(|| min_over_six(black_box(&d), black_box(&p), 1e-9)));
    c.bench_function("classify", |b| {
        b.iter(|| classify(black_box(0.62), black_box(1.37), DEFAULT_BOUNDARY_TOL))
    });
}

fn regions(c: &mut Criterion) {
    let d = BoxDims::new(0.8, 1.3).unwrap();
    c.bench_function("label_region 256", |b| b.iter(|| label_region(black_box(&d), 256, 1e-9).unwrap()));
    let r = label_region(&d, 256, 1e-9).unwrap();
    c.bench_function("signature 256", |b| b.iter(|| signature(black_box(&r)).unwrap()));
}

fn oracles(c: &mut Criterion) {
    let d = BoxDims::new(0.7, 1.9).unwrap();
    let p = SurfacePoint::new(&d, 0.2, 0.3).unwrap();
    let mut g = c.benchmark_group("oracles");
    g.sample_size(10);
    g.bench_function("mesh_geodesic 64", |b| b.iter(|| mesh_geodesic(black_box(&d), &p, 64).unwrap()));
    g.bench_function("spontaneous_checks", |b| b.iter(|| spontaneous_checks().unwrap()));
    g.finish();
}

criterion_group!(kernels, distances, regions, oracles);
criterion_main!(kernels);
