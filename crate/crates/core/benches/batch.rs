//! Batch workloads run through `par::map` and `par::map_seq`. Without the
//! `parallel` feature both arms are sequential.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lambdapack::constructions::pipeline::pipeline_graphs;
use lambdapack::packing::{
    equivalence_predicates, oracle_solve, random_subcubic, sample_cubic, sample_cubic_batch, solve, Budget,
    PackingProblem,
};
use lambdapack::{par, Graph};

type Mapper = fn(&[Graph], &(dyn Fn(&Graph) -> usize + Sync + Send)) -> Vec<usize>;

fn parallel(items: &[Graph], f: &(dyn Fn(&Graph) -> usize + Sync + Send)) -> Vec<usize> {
    par::map(items, f)
}

fn sequential(items: &[Graph], f: &(dyn Fn(&Graph) -> usize + Sync + Send)) -> Vec<usize> {
    par::map_seq(items, f)
}

const ARMS: [(&str, Mapper); 2] = [("parallel", parallel), ("sequential", sequential)];

fn oracle_equivalence(c: &mut Criterion) {
    let graphs: Vec<Graph> = (0..64).map(|s| random_subcubic(11, s)).collect();
    let job = |g: &Graph| {
        let p = PackingProblem::max_packing(g.clone());
        let a = solve(&p).unwrap().verdict.optimum().unwrap();
        let b = oracle_solve(&p).unwrap().verdict.optimum().unwrap();
        assert_eq!(a, b);
        a
    };
    let mut group = c.benchmark_group("oracle_equivalence");
    for (name, run) in ARMS {
        group.bench_function(name, |b| b.iter(|| run(&graphs, &job)));
    }
    group.finish();
}

fn cubic_bound(c: &mut Criterion) {
    let mut group = c.benchmark_group("cubic_bound");
    group.sample_size(20);
    for n in [16, 24] {
        let graphs = sample_cubic_batch(n, 64, 7).unwrap();
        let job = |g: &Graph| {
            solve(&PackingProblem::max_packing(g.clone()))
                .unwrap()
                .verdict
                .optimum()
                .unwrap()
        };
        for (name, run) in ARMS {
            group.bench_with_input(BenchmarkId::new(name, n), &graphs, |b, gs| b.iter(|| run(gs, &job)));
        }
    }
    group.finish();
}

fn predicates(c: &mut Criterion) {
    let graphs: Vec<Graph> = (0..16).map(|s| sample_cubic(12, s).unwrap()).collect();
    let job = |g: &Graph| equivalence_predicates(g, Budget::default()).unwrap().clauses.len();
    let mut group = c.benchmark_group("predicates");
    group.sample_size(10);
    for (name, run) in ARMS {
        group.bench_function(name, |b| b.iter(|| run(&graphs, &job)));
    }
    group.finish();
}

fn pipeline_factor_queries(c: &mut Criterion) {
    let ev = pipeline_graphs().unwrap();
    let graphs: Vec<Graph> = ev
        .bindings
        .into_iter()
        .map(|(_, g)| g)
        .filter(|g| g.n() % 3 == 0)
        .collect();
    let job = |g: &Graph| solve(&PackingProblem::factor(g.clone())).unwrap().stats.nodes as usize;
    let mut group = c.benchmark_group("pipeline_factor_queries");
    for (name, run) in ARMS {
        group.bench_function(name, |b| b.iter(|| run(&graphs, &job)));
    }
    group.finish();
}

criterion_group!(
    benches,
    oracle_equivalence,
    cubic_bound,
    predicates,
    pipeline_factor_queries
);
criterion_main!(benches);
