use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hochex::*;

fn exact_rank(c: &mut Criterion) {
    let mut group = c.benchmark_group("rank");
    for ch in [0u64, 3] {
        let f = FieldSpec::new(ch).unwrap();
        let a = TruncatedAlgebra::cyclic(3, 3, f).unwrap();
        let m = coboundary_matrix(&a);
        group.bench_with_input(BenchmarkId::new("coboundary_3x3", ch), &m, |b, m| b.iter(|| rank(m)));
    }
    group.finish();
}

fn graded_homology(c: &mut Criterion) {
    let mut group = c.benchmark_group("hh2");
    for (s, n) in [(1, 6), (3, 6), (4, 8)] {
        let a = TruncatedAlgebra::cyclic(s, n, FieldSpec::rationals()).unwrap();
        group.bench_function(format!("s{s}_n{n}"), |b| b.iter(|| homology_table(&a).unwrap()));
    }
    group.finish();
}

fn bar_oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("bar_oracle");
    group.sample_size(10);
    for (s, n) in [(2, 3), (3, 3)] {
        let a = TruncatedAlgebra::cyclic(s, n, FieldSpec::prime(3).unwrap()).unwrap();
        group.bench_function(format!("s{s}_n{n}"), |b| b.iter(|| oracle_report(&a).unwrap()));
    }
    group.finish();
}

fn symmetric_form(c: &mut Criterion) {
    let mut group = c.benchmark_group("symmetry");
    group.sample_size(10);
    let f = FieldSpec::rationals();
    let a = TruncatedAlgebra::cyclic(3, 2, f).unwrap();
    let alpha = theta(&a, &combine_basis(&a, 3, &[f.one()]).unwrap()).unwrap();
    let t = build_extension(&a, &alpha).unwrap();
    group.bench_function("twisted_3_2", |b| b.iter(|| symmetry_verdict(t.table(), 0, 64)));
    let zero = Cocycle::zero(&a);
    let t0 = build_extension(&a, &zero).unwrap();
    group.bench_function("trivial_3_2", |b| b.iter(|| symmetry_verdict(t0.table(), 0, 64)));
    group.finish();
}

criterion_group!(kernels, exact_rank, graded_homology, bar_oracle, symmetric_form);
criterion_main!(kernels);
