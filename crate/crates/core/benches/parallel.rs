//! Sequential against data-parallel execution of the parallel kernels.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use steiner_msr::catalog;
use steiner_msr::graphs::incidence_graph;
use steiner_msr::orthrep::random_tail_search_with;
use steiner_msr::sphere::{equivalence_suite, probe_suite};
use steiner_msr::zeroforcing::{heuristic_forcing_set, ForcingVariant};
use steiner_msr::{Execution, TripleSystem};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn kernels(c: &mut Criterion) {
    let fano = TripleSystem::fano();
    let sts15 = catalog::builtin(15).unwrap().swap_remove(0);
    let g13 = incidence_graph(&catalog::builtin(13).unwrap()[0]);
    let g15 = incidence_graph(&sts15);

    let mut group = c.benchmark_group("kernels");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new("tail_search_1e5", name), &exec, |b, &e| {
            b.iter(|| random_tail_search_with(&fano, 2, black_box(100_000), 1, e))
        });
        group.bench_with_input(BenchmarkId::new("equivalence_suite_1e4", name), &exec, |b, &e| {
            b.iter(|| equivalence_suite(black_box(10_000), 1, e))
        });
        group.bench_with_input(BenchmarkId::new("probe_suite_100x1e4", name), &exec, |b, &e| {
            b.iter(|| probe_suite(black_box(100), 10_000, 1, e))
        });
        group.bench_with_input(BenchmarkId::new("colorings_order15", name), &exec, |b, &e| {
            b.iter(|| sts15.count_weak_two_colorings(e).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("girth_order15", name), &exec, |b, &e| b.iter(|| g15.girth_with(e)));
        group.bench_with_input(BenchmarkId::new("forcing_heuristic_order13", name), &exec, |b, &e| {
            b.iter(|| heuristic_forcing_set(&g13, ForcingVariant::Psd, 64, 1, e).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, kernels);
criterion_main!(benches);
