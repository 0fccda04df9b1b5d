//! Hot-path benchmarks: fiber enumeration, connectivity flows, and the
//! spectral analysis that dominates the experiment sweeps.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fiberwalk::{
    build_ak, edge_connectivity, enumerate_fiber, metropolis_matrix, slem, ConnectivityReport,
};
use fiberwalk_bench::{graver_graph, lex_graph, scaled_unit_rhs};

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_fiber");
    for (k, scale) in [(2usize, 2i64), (3, 2), (3, 3)] {
        let inst = build_ak(k);
        let b = scaled_unit_rhs(k, scale);
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("k{k}_c{scale}")),
            &b,
            |bench, b| bench.iter(|| enumerate_fiber(inst.matrix(), b).unwrap().len()),
        );
    }
    group.finish();
}

fn connectivity(c: &mut Criterion) {
    let mut group = c.benchmark_group("connectivity");
    group.sample_size(10);
    let dense = graver_graph(2, 2);
    group.bench_function("edge_cut_graver_k2_c2", |bench| {
        bench.iter(|| edge_connectivity(dense.graph()).unwrap().0)
    });
    let sparse = lex_graph(3, 1);
    group.bench_function("full_report_lex_k3_unit", |bench| {
        bench.iter(|| ConnectivityReport::compute(sparse.graph()).unwrap().vertex_connectivity)
    });
    group.finish();
}

fn spectral(c: &mut Criterion) {
    let mut group = c.benchmark_group("spectral");
    group.sample_size(10);
    for scale in [2i64, 3] {
        let fg = graver_graph(3, scale);
        let p = metropolis_matrix(fg.graph()).unwrap();
        group.bench_with_input(
            BenchmarkId::new("slem_graver_k3", scale),
            &p,
            |bench, p| bench.iter(|| slem(p).unwrap()),
        );
    }
    group.finish();
}

criterion_group!(benches, enumeration, connectivity, spectral);
criterion_main!(benches);
