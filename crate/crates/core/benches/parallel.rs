use antiwell_core::oracle::{aligned_grid_size, build_operator, lowest_eigenvalues_with};
use antiwell_core::spectrum::{special_v0_catalog_with, SpecialCondition};
use antiwell_core::{solve_spectrum, Execution, PotentialGeometry, SpectrumRequest};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

const MODES: [(&str, Execution); 2] =
    [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn oracle_bisection(c: &mut Criterion) {
    let geom = PotentialGeometry::reference(26.31113).unwrap();
    let op = build_operator(&geom, aligned_grid_size(&geom, 8000)).unwrap();
    let mut group = c.benchmark_group("oracle_lowest_18");
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| lowest_eigenvalues_with(black_box(&op), 18, exec))
        });
    }
    group.finish();
}

fn spectrum_solve(c: &mut Criterion) {
    let geom = PotentialGeometry::reference(26.31113).unwrap();
    let mut group = c.benchmark_group("spectrum_18_states");
    group.sample_size(20);
    for (name, exec) in MODES {
        let req = SpectrumRequest::count(geom, 18).with_execution(exec);
        group.bench_with_input(BenchmarkId::from_parameter(name), &req, |b, req| {
            b.iter(|| solve_spectrum(black_box(req)).unwrap())
        });
    }
    group.finish();
}

fn special_catalog(c: &mut Criterion) {
    let geom = PotentialGeometry::reference(1.0).unwrap();
    let mut group = c.benchmark_group("g_catalog_4");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| special_v0_catalog_with(SpecialCondition::GTop, 4, black_box(&geom), exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, oracle_bisection, spectrum_solve, special_catalog);
criterion_main!(benches);
