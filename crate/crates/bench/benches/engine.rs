use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use orbifund::graph::{enumerate_covers, SerreGraph};
use orbifund::group::low_index::all_subgroups;
use orbifund::orbispace::corpus::sl2z;
use orbifund::orbispace::{enumerate_fpr_covers, from_ggraph};
use orbifund::quotient::{doomed_kernel, quotient_pi1_sequence};
use orbifund::{coset_enumerate, Bounds, Budget, Presentation};
use orbifund_bench::{actions, finite_presentations};

fn budget() -> Budget {
    Budget::new(Bounds::default().node_budget)
}

fn coset_enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("coset_enumerate");
    for (name, p) in finite_presentations() {
        group.bench_function(name, |b| b.iter(|| coset_enumerate(black_box(&p), &[], 10_000).unwrap()));
    }
    group.finish();
}

fn low_index(c: &mut Criterion) {
    let f2 = Presentation::free(2);
    c.bench_function("low_index/f2_index_4", |b| b.iter(|| all_subgroups(black_box(&f2), 4, &mut budget()).unwrap()));
    let theta = SerreGraph::theta(3);
    c.bench_function("covers/theta3_degree_3", |b| {
        b.iter(|| enumerate_covers(black_box(&theta), 3, &mut budget()).unwrap())
    });
}

fn quotients(c: &mut Criterion) {
    let corpus = actions(20);
    c.bench_function("quotient/corpus_20", |b| {
        b.iter(|| corpus.iter().map(|a| quotient_pi1_sequence(a).unwrap().image_rank).sum::<usize>())
    });
    c.bench_function("doomed/corpus_20", |b| {
        b.iter(|| corpus.iter().map(|a| doomed_kernel(a, 8).unwrap().doomed_generators.len()).sum::<usize>())
    });
    c.bench_function("ggraph/corpus_20", |b| {
        b.iter(|| corpus.iter().map(|a| from_ggraph(a).unwrap().markings().len()).sum::<usize>())
    });
}

fn orbispaces(c: &mut Criterion) {
    let o = sl2z();
    c.bench_function("fpr/sl2z_index_4", |b| b.iter(|| enumerate_fpr_covers(black_box(&o), 4, &mut budget()).unwrap()));
}

criterion_group!(benches, coset_enumeration, low_index, quotients, orbispaces);
criterion_main!(benches);
