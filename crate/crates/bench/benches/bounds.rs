use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use varbound_core::{
    full_report, mbp_bound_literal, optimize, random_hermitian, random_state, spin1_operators,
    sweep, theta_state, ObjectiveKind, OptimizerConfig, OrthonormalBasis, SweepSpec, Weight,
};

fn weights() -> Vec<Weight> {
    vec![Weight::new(1.0 / 3.0).unwrap(), Weight::new(0.5).unwrap()]
}

fn bench_report(c: &mut Criterion) {
    let (lx, ly, _) = spin1_operators();
    let psi = theta_state(0.7);
    let basis = OrthonormalBasis::standard(3);
    let ws = weights();
    c.bench_function("full_report spin1", |b| {
        b.iter(|| full_report(black_box(&lx), black_box(&ly), &psi, &basis, &ws).unwrap())
    });

    let a = random_hermitian(8, 1).unwrap();
    let bb = random_hermitian(8, 2).unwrap();
    let psi8 = random_state(8, 3).unwrap();
    let basis8 = OrthonormalBasis::standard(8);
    c.bench_function("mbp_bound_literal n=8", |b| {
        b.iter(|| mbp_bound_literal(black_box(&a), &bb, &psi8, &basis8).unwrap())
    });
}

fn bench_sweep(c: &mut Criterion) {
    let (lx, ly, _) = spin1_operators();
    let spec = SweepSpec::standard(weights());
    c.bench_function("spin-1 sweep 181 points", |b| {
        b.iter(|| sweep(&lx, &ly, theta_state, black_box(&spec)).unwrap())
    });
}

fn bench_optimize(c: &mut Criterion) {
    let a = random_hermitian(3, 10).unwrap();
    let b = random_hermitian(3, 11).unwrap();
    let psi = random_state(3, 12).unwrap();
    let cfg = OptimizerConfig::default();
    let mut group = c.benchmark_group("optimize n=3");
    group.sample_size(10);
    group.bench_function("milne", |bch| {
        bch.iter(|| optimize(&a, &b, &psi, ObjectiveKind::Milne, black_box(&cfg)).unwrap())
    });
    group.bench_function("callebaut 0.5", |bch| {
        let kind = ObjectiveKind::Callebaut(Weight::new(0.5).unwrap());
        bch.iter(|| optimize(&a, &b, &psi, kind, black_box(&cfg)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_report, bench_sweep, bench_optimize);
criterion_main!(benches);
