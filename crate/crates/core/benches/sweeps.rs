use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use sixglue::fincat::{EdgeClass, FinCategory, MarkedCategory};
use sixglue::grid::{enumerate_grid_simplices, Discipline};
use sixglue::laws::{factorization_laws, kart_laws, DEFAULT_SEED};
use sixglue::{Exec, Poset, SubNerve};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn sweeps(c: &mut Criterion) {
    let mut group = c.benchmark_group("sweeps");
    group.sample_size(10);

    let grid = Arc::new(FinCategory::from_poset(Arc::new(Poset::grid(3, 3))));
    let marked = MarkedCategory::new(grid.clone(), EdgeClass::all(&grid), EdgeClass::all(&grid));
    let cube = Arc::new(Poset::product(&Poset::grid(2, 2), &Poset::chain(2)));

    for (label, exec) in MODES {
        group.bench_with_input(BenchmarkId::new("kart-laws", label), &exec, |b, &exec| {
            b.iter(|| kart_laws(1, 6, exec).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("factorization-laws", label), &exec, |b, &exec| {
            b.iter(|| factorization_laws(DEFAULT_SEED, 40, 8, exec).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("grid-simplices", label), &exec, |b, &exec| {
            b.iter(|| enumerate_grid_simplices(&marked, 2, Discipline::Cart, 10_000_000, exec).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("nerve", label), &exec, |b, &exec| {
            b.iter(|| SubNerve::nerve_with(cube.clone(), None, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, sweeps);
criterion_main!(benches);
