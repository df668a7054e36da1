use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fracspde::duhamel::{deterministic_solve, pathwise_simulate};
use fracspde_bench::config;

fn deterministic(c: &mut Criterion) {
    let mut g = c.benchmark_group("deterministic");
    g.sample_size(10);
    for alpha in [0.75, 1.5] {
        let cfg = config(alpha, 8, 32);
        let f = |_: f64, _: f64, u: f64| -u;
        g.bench_with_input(BenchmarkId::from_parameter(alpha), &cfg, |b, cfg| {
            b.iter(|| deterministic_solve(cfg, &f).unwrap())
        });
    }
    g.finish();
}

fn pathwise(c: &mut Criterion) {
    let mut g = c.benchmark_group("pathwise");
    g.sample_size(10);
    for alpha in [0.75, 1.5] {
        let cfg = config(alpha, 8, 32);
        g.bench_with_input(BenchmarkId::from_parameter(alpha), &cfg, |b, cfg| {
            b.iter(|| pathwise_simulate(cfg).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, deterministic, pathwise);
criterion_main!(benches);
