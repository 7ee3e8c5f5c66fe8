use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use smalltri::lemma::scan_lemma;
use smalltri::objectives::evaluate;
use smalltri::search::{lattice_brute_force, maximize_min_area, minimize_small_count, Objective};
use smalltri_bench::{point_cloud, single_restart};

fn triple_areas(c: &mut Criterion) {
    for n in [5, 40, 120] {
        let cfg = point_cloud(n);
        c.bench_function(&format!("evaluate n={n}"), |b| b.iter(|| evaluate(black_box(&cfg))));
    }
}

fn lattice(c: &mut Criterion) {
    let mut g = c.benchmark_group("lattice");
    g.sample_size(10);
    g.bench_function("k=6 n=5", |b| {
        b.iter(|| lattice_brute_force(black_box(6), 5, Objective::MaxMinArea).unwrap())
    });
    g.finish();
}

fn annealing(c: &mut Criterion) {
    let mut g = c.benchmark_group("restart");
    g.sample_size(10);
    let max_min = single_restart(Objective::MaxMinArea);
    g.bench_function("max-min-area", |b| b.iter(|| maximize_min_area(black_box(&max_min)).unwrap()));
    let sigma = 0.25 + 1e-9;
    let count = single_restart(Objective::MinSmallCount { sigma });
    g.bench_function("min-small-count", |b| {
        b.iter(|| minimize_small_count(black_box(&count), sigma).unwrap())
    });
    g.finish();
}

fn lemma(c: &mut Criterion) {
    let mut g = c.benchmark_group("lemma");
    g.sample_size(10);
    g.bench_function("scan step 1e-5", |b| b.iter(|| scan_lemma(black_box(1e-5)).unwrap()));
    g.finish();
}

criterion_group!(benches, triple_areas, lattice, annealing, lemma);
criterion_main!(benches);
