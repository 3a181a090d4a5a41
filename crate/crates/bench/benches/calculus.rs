use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use metaplectic_bench::{aux, global_fixtures, good_parity, widest};
use metaplectic_core::components::enumerate_splittings;
use metaplectic_core::epsilon::verify_descent;
use metaplectic_core::fixtures;
use metaplectic_core::global::{character_constraint_set, epsilon_psi, nu_factorization_check};
use metaplectic_core::parameters::{enumerate_parameters, Restriction};

fn enumeration(c: &mut Criterion) {
    let cat = fixtures::f1();
    let mut g = c.benchmark_group("enumerate");
    for n in [2, 4, 6] {
        g.bench_with_input(BenchmarkId::new("all", n), &n, |b, &n| {
            b.iter(|| enumerate_parameters(&cat, n, Restriction::All).unwrap())
        });
    }
    g.finish();
    let psi = widest(6);
    c.bench_function("splittings/widest n=6", |b| b.iter(|| enumerate_splittings(black_box(&psi))));
}

fn descent(c: &mut Criterion) {
    let mut g = c.benchmark_group("descent");
    for n in [3, 6] {
        let params = good_parity(n);
        g.bench_with_input(BenchmarkId::new("good parity over F1", n), &params, |b, params| {
            b.iter(|| params.iter().all(|p| verify_descent(p).unwrap().ok()))
        });
    }
    g.finish();
}

fn global(c: &mut Criterion) {
    let fixtures = global_fixtures(50, 1);
    c.bench_function("factorization/50 random fixtures", |b| {
        b.iter(|| {
            fixtures
                .iter()
                .all(|(cat, gp, places)| nu_factorization_check(cat, gp, places).unwrap().ok())
        })
    });
    let (cat, gp, places) = aux();
    let target = epsilon_psi(&cat, &gp, None).unwrap();
    c.bench_function("constraint set/aux fixture", |b| {
        b.iter(|| character_constraint_set(&cat, &gp, &places, black_box(&target)).unwrap())
    });
}

criterion_group!(benches, enumeration, descent, global);
criterion_main!(benches);
