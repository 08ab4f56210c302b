use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use nearlab::derivation::enumerate_mult_derivations;
use nearlab::enumerate::{additive_endomorphisms, enumerate_groups, enumerate_nearrings};
use nearlab::fixtures;
use nearlab::report::{sweep, SweepOptions};
use nearlab::theorems::registry;

fn groups(c: &mut Criterion) {
    c.bench_function("enumerate_groups(6)", |b| b.iter(|| enumerate_groups(black_box(6))));
    let g = nearlab_bench::klein_four();
    c.bench_function("additive_endomorphisms(K4)", |b| b.iter(|| additive_endomorphisms(black_box(&g))));
}

fn near_rings(c: &mut Criterion) {
    let g = nearlab_bench::klein_four();
    c.bench_function("enumerate_nearrings(K4)", |b| b.iter(|| enumerate_nearrings(black_box(&g))));
}

fn derivations(c: &mut Criterion) {
    let s3 = fixtures::s3_zero();
    c.bench_function("enumerate_mult_derivations(S3_ZERO)", |b| {
        b.iter(|| enumerate_mult_derivations(black_box(&s3)))
    });
}

fn theorem_sweep(c: &mut Criterion) {
    let catalog = nearlab_bench::catalog_up_to(3);
    let specs = registry();
    let opts = SweepOptions { canonical: true, ..Default::default() };
    c.bench_function("sweep(order <= 3)", |b| b.iter(|| sweep(black_box(&catalog), &specs, opts)));
}

criterion_group!(benches, groups, near_rings, derivations, theorem_sweep);
criterion_main!(benches);
