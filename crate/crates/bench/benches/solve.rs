use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use cwcolor::{
    build_family, solve_global_k_roman, solve_max_pds, solve_with, Builtin, Family, RomanVariant, SolveOptions,
};
use cwcolor_bench::family_instance;

fn mis_paths(c: &mut Criterion) {
    let mut group = c.benchmark_group("mis_path");
    for n in [50, 100, 200] {
        let (m, e) = family_instance(Family::Path, n, &Builtin::MaxIndependentSet);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| solve_with(black_box(&m), black_box(&e), SolveOptions::default()).unwrap())
        });
    }
    group.finish();
}

fn mis_complete(c: &mut Criterion) {
    let (m, e) = family_instance(Family::Complete, 200, &Builtin::MaxIndependentSet);
    c.bench_function("mis_complete_200", |b| {
        b.iter(|| solve_with(black_box(&m), black_box(&e), SolveOptions::default()).unwrap())
    });
}

fn local_problems_on_cycles(c: &mut Criterion) {
    let mut group = c.benchmark_group("cycle_20");
    let specs = [("mds", Builtin::MinDominatingSet), ("kcoloring3", Builtin::KColoring { k: 3 })];
    for (name, spec) in specs {
        let (m, e) = family_instance(Family::Cycle, 20, &spec);
        group.bench_function(name, |b| {
            b.iter(|| solve_with(black_box(&m), black_box(&e), SolveOptions::default()).unwrap())
        });
    }
    group.finish();
    let (m, e) = family_instance(Family::Cycle, 8, &Builtin::KRoman { k: 2 });
    c.bench_function("kroman2_cycle_8", |b| {
        b.iter(|| solve_with(black_box(&m), black_box(&e), SolveOptions::default()).unwrap())
    });
}

fn pruning(c: &mut Criterion) {
    let mut group = c.benchmark_group("kroman1_cycle_8");
    let (m, e) = family_instance(Family::Cycle, 8, &Builtin::KRoman { k: 1 });
    for prune in [true, false] {
        let opts = SolveOptions { prune, want_coloring: false };
        group.bench_with_input(BenchmarkId::new("prune", prune), &opts, |b, &opts| {
            b.iter(|| solve_with(black_box(&m), black_box(&e), opts).unwrap())
        });
    }
    group.finish();
}

fn drivers(c: &mut Criterion) {
    let mut group = c.benchmark_group("drivers");
    group.sample_size(10);
    let e = build_family(Family::Cycle, 6, None).unwrap();
    let g = e.realize().0;
    group.bench_function("global_kroman1_cycle_6", |b| {
        b.iter(|| solve_global_k_roman(1, black_box(&g), black_box(&e), RomanVariant::Strict).unwrap())
    });
    group.bench_function("max_pds_cycle_6", |b| b.iter(|| solve_max_pds(black_box(&g), black_box(&e), &[]).unwrap()));
    group.finish();
}

criterion_group!(benches, mis_paths, mis_complete, local_problems_on_cycles, pruning, drivers);
criterion_main!(benches);
