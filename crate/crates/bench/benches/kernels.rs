use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use detloci_core::angles::{max_angle, min_angle, min_angle_perp};
use detloci_core::chern::{example_tables, ExampleFamily, ExampleRow};
use detloci_core::grassmann::{
    compound_matrix, curvature_sample, fs_distance, pluecker_embed_exact, random_unit_tangent, GrassmannPoint,
    RationalGrassmannPoint,
};
use detloci_core::random;
use detloci_core::suites::{run_suite, Suite, SuiteConfig};

fn angles(c: &mut Criterion) {
    let mut rng = random::stream(1, 0);
    let u = random::subspace(&mut rng, 8, 5);
    let v = random::subspace(&mut rng, 8, 4);
    c.bench_function("max_angle 8d", |b| b.iter(|| max_angle(black_box(&u), black_box(&v))));
    c.bench_function("min_angle 8d", |b| b.iter(|| min_angle(black_box(&u), black_box(&v), 1e-9)));
    c.bench_function("min_angle_perp 8d", |b| b.iter(|| min_angle_perp(black_box(&u), black_box(&v))));
}

fn grassmann(c: &mut Criterion) {
    let mut rng = random::stream(2, 0);
    let p = GrassmannPoint::new(random::complex_gaussian(&mut rng, 2, 5)).unwrap();
    let q = GrassmannPoint::new(random::complex_gaussian(&mut rng, 2, 5)).unwrap();
    c.bench_function("fs_distance Gr(2,5)", |b| b.iter(|| fs_distance(black_box(&p), black_box(&q))));

    let exact = loop {
        let m = random::integer_complex_matrix(&mut rng, 3, 6, 3);
        if let Ok(p) = RationalGrassmannPoint::new(m) {
            break p;
        }
    };
    c.bench_function("exact pluecker Gr(3,6) with relations", |b| {
        b.iter(|| pluecker_embed_exact(black_box(&exact)).relation_residuals())
    });

    let a = random::complex_gaussian(&mut rng, 5, 5);
    c.bench_function("compound order 2 of 5x5", |b| b.iter(|| compound_matrix(black_box(&a), 2)));

    let u = random_unit_tangent(&mut rng, 2, 5);
    c.bench_function("curvature sample Gr(2,5)", |b| b.iter(|| curvature_sample(black_box(&u))));
}

fn chern(c: &mut Criterion) {
    c.bench_function("example 2 row n=10", |b| {
        b.iter(|| ExampleRow::compute(ExampleFamily::Surfaces, black_box(10)))
    });
    c.bench_function("example 1 table n=2..10", |b| {
        b.iter(|| example_tables(ExampleFamily::Curves, 2, black_box(10)))
    });
}

fn suites(c: &mut Criterion) {
    let mut group = c.benchmark_group("suite x100");
    group.sample_size(10);
    for suite in [Suite::SubAdd, Suite::Geometric, Suite::FsTriangle, Suite::DualEngine] {
        let config = SuiteConfig {
            trials: 100,
            timestamps: false,
            ..SuiteConfig::default()
        };
        group.bench_function(suite.name(), |b| b.iter(|| run_suite(suite, &config)));
    }
    group.finish();
}

criterion_group!(benches, angles, grassmann, chern, suites);
criterion_main!(benches);
