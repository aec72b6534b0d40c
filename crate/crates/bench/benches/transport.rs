//! Measures the kernels a sweep spends its time in: the N-layer solve, the
//! single-slab closed form, a full transmission sweep, the RK4 cross-check,
//! one Landauer current integral, and the traversal-time quadrature.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use nemslab_core::{
    current, integrate_through, reference_slab, solve_n_layer, transmission_closed_form,
    traversal_numeric, BiasKind, LandauerConfig, SlabVariant,
};

fn bench_single_solve(c: &mut Criterion) {
    let s = reference_slab(5.0, SlabVariant::Standard).unwrap();
    c.bench_function("solve_n_layer d=5 E=0.2", |b| {
        b.iter(|| solve_n_layer(black_box(0.2), &s).unwrap().transmission)
    });
    c.bench_function("closed form d=5 E=0.2", |b| {
        b.iter(|| transmission_closed_form(black_box(0.2), &s).unwrap())
    });
}

fn bench_transmission_sweep(c: &mut Criterion) {
    let s = reference_slab(15.0, SlabVariant::Standard).unwrap();
    c.bench_function("transmission sweep 600 points d=15", |b| {
        b.iter(|| {
            let mut acc = 0.0;
            for i in 0..600 {
                let e = 0.001 + i as f64 * (0.6 - 0.001) / 599.0;
                acc += solve_n_layer(black_box(e), &s).unwrap().transmission;
            }
            acc
        })
    });
}

fn bench_oracle(c: &mut Criterion) {
    let s = reference_slab(5.0, SlabVariant::Standard).unwrap();
    c.bench_function("rk4 integration d=5 step 1e-2", |b| {
        b.iter(|| integrate_through(black_box(0.2), &s, 1e-2).unwrap().transmission)
    });
}

fn bench_current(c: &mut Criterion) {
    let s = reference_slab(5.0, SlabVariant::Standard).unwrap();
    let cfg = LandauerConfig::for_sweep(&s, 1.2);
    c.bench_function("landauer current V=0.3 (4001-point integral)", |b| {
        b.iter(|| current(black_box(0.3), &s, BiasKind::Midpoint, &cfg).unwrap().j_norm)
    });
}

fn bench_traversal(c: &mut Criterion) {
    let s = reference_slab(5.0, SlabVariant::Standard).unwrap();
    c.bench_function("traversal quadrature n=4096 d=5 E=0.2", |b| {
        b.iter(|| traversal_numeric(black_box(0.2), &s, 4096).unwrap())
    });
}

criterion_group!(
    benches,
    bench_single_solve,
    bench_transmission_sweep,
    bench_oracle,
    bench_current,
    bench_traversal
);
criterion_main!(benches);
