use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fracspde::greens::{Kernel, KernelKind};
use fracspde::noise::sample_field;
use fracspde::specfun::{mittag_leffler, wright_phi};
use fracspde::{FractionalOrder, SeriesControl};
use fracspde_bench::{noise_grid, noise_spec};

fn specfun(c: &mut Criterion) {
    let ctl = SeriesControl::default();
    let mut g = c.benchmark_group("specfun");
    for z in [0.5, 5.0, 20.0] {
        g.bench_with_input(BenchmarkId::new("wright", z), &z, |b, &z| {
            b.iter(|| wright_phi(-0.375, 0.25, black_box(z), ctl).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("mittag_leffler", z), &z, |b, &z| {
            b.iter(|| mittag_leffler(0.75, 1.0, black_box(-z), ctl).unwrap())
        });
    }
    g.finish();
}

fn kernels(c: &mut Criterion) {
    let mut g = c.benchmark_group("kernel");
    for (kind, name) in [(KernelKind::Y, "y"), (KernelKind::Z1, "z1"), (KernelKind::Z2, "z2")] {
        let k = Kernel::new(kind, FractionalOrder::new(1.5).unwrap(), 2).unwrap();
        g.bench_function(name, |b| b.iter(|| k.radial(black_box(0.7), black_box(1.3)).unwrap()));
    }
    g.finish();
}

fn sampler(c: &mut Criterion) {
    let spec = noise_spec(1);
    let mut g = c.benchmark_group("sample_field");
    g.sample_size(20);
    for n in [16, 64] {
        let grid = noise_grid(n, n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &grid, |b, grid| {
            b.iter(|| sample_field(&spec, grid, black_box(3)).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, specfun, kernels, sampler);
criterion_main!(benches);
