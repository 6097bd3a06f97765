use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rikitake_core::algebra::rat_int;
use rikitake_core::integrate::{conjugacy_gap, integrate, Method, NumericSystem};

fn trajectories(c: &mut Criterion) {
    let r3 = NumericSystem::r3(&rat_int(0));
    let r4 = NumericSystem::r4(&rat_int(1)).unwrap();
    let w0 = [0.4, 0.0, 0.3, 0.2];
    let mut g = c.benchmark_group("integrate_10k");
    for method in [Method::Rk4, Method::Midpoint] {
        g.bench_with_input(BenchmarkId::new("r3", method), &method, |b, &m| {
            b.iter(|| integrate(&r3, &[1.0, 2.0, 3.0], 1e-3, 10_000, m).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("r4", method), &method, |b, &m| {
            b.iter(|| integrate(&r4, &w0, 1e-3, 10_000, m).unwrap())
        });
    }
    g.finish();
    c.bench_function("conjugacy_gap_10k", |b| {
        b.iter(|| conjugacy_gap(&rat_int(1), &w0, 1e-3, 10_000, Method::Rk4).unwrap())
    });
}

criterion_group!(benches, trajectories);
criterion_main!(benches);
