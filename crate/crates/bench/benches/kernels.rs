use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use microcav_bench::{cavity_dbr, design_space, fundamental_map, fundamental_scan, stopband_grid};
use microcav_core::{
    fit_gaussian_2d, fit_peaks_lorentzian, optimize_design, reflectivity_spectrum, stack_response, Objective,
    Polarization,
};

fn optics(c: &mut Criterion) {
    let stack = cavity_dbr().stack;
    c.bench_function("stack_response", |b| {
        b.iter(|| stack_response(black_box(&stack), black_box(785.0), 0.0, Polarization::S).unwrap())
    });
    let grid = stopband_grid(4001);
    c.bench_function("reflectivity_spectrum_4001", |b| {
        b.iter(|| reflectivity_spectrum(black_box(&stack), &grid, 0.0, Polarization::S).unwrap())
    });
}

fn fits(c: &mut Criterion) {
    let trace = fundamental_scan(1);
    c.bench_function("fit_lorentzian_801", |b| b.iter(|| fit_peaks_lorentzian(black_box(&trace), 1).unwrap()));
    let map = fundamental_map(1);
    c.bench_function("fit_gaussian_2d_65x65", |b| b.iter(|| fit_gaussian_2d(black_box(&map)).unwrap()));
}

fn design(c: &mut Criterion) {
    let space = design_space();
    let mut group = c.benchmark_group("optimize");
    group.sample_size(10);
    group.bench_function("max_branching", |b| {
        b.iter(|| optimize_design(black_box(&space), Objective::MaxBranching, None).unwrap())
    });
    group.finish();
}

criterion_group!(benches, optics, fits, design);
criterion_main!(benches);
