use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use airy_wkb::airy::{airy_quad, log_derivs, Branch};
use airy_wkb::quasi_uniform::log_derivative;
use airy_wkb::reference::numerov_solve;
use airy_wkb::tables::compute_table;
use airy_wkb::{solve_level, ApproxState, EffectiveProfile, GridSpec, LevelKey, ProblemSetup, TableKind};

fn airy(c: &mut Criterion) {
    let mut g = c.benchmark_group("airy");
    // Taylor table, then the oscillatory and growing asymptotic branches.
    for a in [1.3, -25.0, 25.0] {
        g.bench_function(format!("quad/{a}"), |b| b.iter(|| airy_quad(black_box(a)).unwrap()));
    }
    g.bench_function("log_derivs/plus_i", |b| b.iter(|| log_derivs(black_box(-3.7), Branch::PlusI).unwrap()));
    g.finish();
}

fn riccati(c: &mut Criterion) {
    let p = EffectiveProfile::new(ProblemSetup::default(), 1, 5.0).unwrap();
    c.bench_function("riccati/log_derivative", |b| b.iter(|| log_derivative(&p, black_box(1.4), Branch::PlusI).unwrap()));
}

fn levels(c: &mut Criterion) {
    let s = ProblemSetup::default();
    let level = LevelKey::new(1, 1);
    let mut g = c.benchmark_group("level");
    g.sample_size(20);
    g.bench_function("solve", |b| b.iter(|| solve_level(&s, black_box(level)).unwrap()));
    g.bench_function("build_state", |b| b.iter(|| ApproxState::build(&s, black_box(level)).unwrap()));
    g.bench_function("numerov", |b| b.iter(|| numerov_solve(&s, black_box(level), &GridSpec::default()).unwrap()));
    g.finish();
}

fn tables(c: &mut Criterion) {
    let mut g = c.benchmark_group("table");
    g.sample_size(10);
    for kind in [TableKind::Oscillator, TableKind::Linear] {
        let s = kind.default_setup();
        g.bench_function(format!("{kind:?}"), |b| b.iter(|| compute_table(kind, &s, &GridSpec::default()).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, airy, riccati, levels, tables);
criterion_main!(benches);
