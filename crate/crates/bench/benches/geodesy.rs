use buresgeo_bench::{state_pair, unit_grid};
use buresgeo_core::{
    generator_basis, geodesic_point, geometric_mean_operator, root_fidelity, werner, WernerKind,
};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

fn fidelity(c: &mut Criterion) {
    let mut group = c.benchmark_group("root_fidelity");
    for n in [2usize, 4, 8, 16] {
        let (a, b) = state_pair(n, 1);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |bench, _| {
            bench.iter(|| root_fidelity(black_box(&a), black_box(&b)).unwrap())
        });
    }
    group.finish();
}

fn geodesic(c: &mut Criterion) {
    let mut group = c.benchmark_group("geometric_mean_operator");
    for n in [2usize, 4, 8, 16] {
        let (a, b) = state_pair(n, 2);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |bench, _| {
            bench.iter(|| geometric_mean_operator(black_box(&a), black_box(&b)).unwrap())
        });
    }
    group.finish();

    let (a, b) = state_pair(8, 3);
    let path = geometric_mean_operator(&a, &b).unwrap();
    let samples = path.sample_parameters(11);
    c.bench_function("geodesic_point/8x11", |bench| {
        bench.iter(|| {
            for &s in &samples {
                black_box(geodesic_point(&path, s).unwrap());
            }
        })
    });
}

fn basis(c: &mut Criterion) {
    let mut group = c.benchmark_group("generator_basis_tensors");
    for n in [2usize, 3, 4, 8] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |bench, &n| {
            bench.iter(|| {
                let basis = generator_basis(n).unwrap();
                black_box(basis.d(0, 0, 0));
            })
        });
    }
    group.finish();
}

fn werner_sweep(c: &mut Criterion) {
    let grid = unit_grid(101);
    c.bench_function("werner_sweep/101", |bench| {
        bench.iter(|| {
            for &p in &grid {
                let a = werner(WernerKind::Ghz, p).unwrap();
                let b = werner(WernerKind::W, p).unwrap();
                black_box(root_fidelity(&a, &b).unwrap());
            }
        })
    });
}

criterion_group!(benches, fidelity, geodesic, basis, werner_sweep);
criterion_main!(benches);
