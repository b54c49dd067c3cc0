use lambdapack::connectivity::connectivity_at_least;
use lambdapack::constructions::atlas;
use lambdapack::packing::{
    enumerate_paths, equivalence_predicates, oracle_solve, random_subcubic, sample_cubic, solve, verify_witness,
    Budget, ClauseValue, PackingProblem, Verdict,
};
use lambdapack::{Edge, Graph};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        proptest::collection::vec(prop::bool::weighted(0.35), pairs.len()).prop_map(move |keep| {
            let edges: Vec<(usize, usize)> = pairs.iter().zip(&keep).filter(|(_, k)| **k).map(|(p, _)| *p).collect();
            Graph::from_edges(n, &edges).unwrap()
        })
    })
}

/// A random problem over `g`: a few deleted vertices and edges, forced and
/// forbidden edges drawn from the rest.
fn constrained(g: Graph, seed: u64, factor: bool) -> PackingProblem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p = if factor {
        PackingProblem::factor(g.clone())
    } else {
        PackingProblem::max_packing(g.clone())
    };
    let mut edges = g.edges().to_vec();
    edges.shuffle(&mut rng);
    for e in edges {
        match rng.gen_range(0..10) {
            0 => p = p.delete_edge(e),
            1 => p = p.forbid_edge(e),
            2 => p = p.force_edge(e),
            _ => {}
        }
    }
    for v in 0..g.n() {
        if rng.gen_range(0..8) == 0 {
            p = p.delete_vertex(v);
        }
    }
    let mut v = g.n();
    while factor && p.active_vertices() % 3 != 0 {
        v -= 1;
        p = p.delete_vertex(v);
    }
    p
}

fn same(a: &Verdict, b: &Verdict) -> bool {
    match (a, b) {
        (Verdict::Optimum { value: x, .. }, Verdict::Optimum { value: y, .. }) => x == y,
        _ => a.is_sat() == b.is_sat() && a.is_unsat() == b.is_unsat(),
    }
}

fn lambda(g: &Graph) -> usize {
    solve(&PackingProblem::max_packing(g.clone()))
        .unwrap()
        .verdict
        .optimum()
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn solver_agrees_with_oracle(g in graph_strategy(11), seed in any::<u64>(), factor in any::<bool>()) {
        let p = constrained(g, seed, factor);
        let (fast, slow) = match (solve(&p), oracle_solve(&p)) {
            (Ok(a), Ok(b)) => (a.verdict, b.verdict),
            (Err(a), Err(b)) => {
                prop_assert_eq!(a.to_string(), b.to_string());
                return Ok(());
            }
            (a, b) => return Err(TestCaseError::fail(format!("solver {a:?}, oracle {b:?}"))),
        };
        prop_assert!(same(&fast, &slow), "solver {:?}, oracle {:?}", fast, slow);
        if let Some(w) = fast.witness() {
            prop_assert_eq!(verify_witness(&p, w), Ok(()));
        }
    }

    #[test]
    fn packing_bounds(g in graph_strategy(12)) {
        let l = lambda(&g);
        prop_assert!(l <= g.n() / 3);
        let paths = enumerate_paths(&PackingProblem::max_packing(g.clone()));
        prop_assert_eq!(l == 0, paths.is_empty());
    }

    #[test]
    fn deleting_a_vertex_costs_at_most_one(g in graph_strategy(11), v in any::<prop::sample::Index>()) {
        let v = v.index(g.n());
        let (rest, _) = g.without_vertices(&[v]).unwrap();
        prop_assert!(lambda(&rest) + 1 >= lambda(&g));
        prop_assert!(lambda(&rest) <= lambda(&g));
    }

    #[test]
    fn bad_component_sizes_block_factors(g in graph_strategy(12)) {
        if g.n() % 3 != 0 {
            return Ok(());
        }
        let p = PackingProblem::factor(g.clone());
        let blocked = g.components().iter().any(|c| c.len() % 3 != 0);
        let r = solve(&p).unwrap().verdict;
        if blocked {
            prop_assert!(r.is_unsat());
        }
        prop_assert!(same(&r, &oracle_solve(&p).unwrap().verdict));
    }

    #[test]
    fn forced_edge_with_deleted_end_never_yields_the_end(g in graph_strategy(10), pick in any::<prop::sample::Index>()) {
        if g.edge_count() == 0 {
            return Ok(());
        }
        let e = g.edges()[pick.index(g.edge_count())];
        let p = PackingProblem::max_packing(g.clone()).force_edge(e).delete_vertex(e.0);
        match solve(&p) {
            Err(_) => {}
            Ok(r) => {
                prop_assert!(r.verdict.is_unsat());
                for path in r.verdict.witness().unwrap_or(&[]) {
                    prop_assert!(!path.contains_vertex(e.0));
                }
            }
        }
    }
}

#[test]
fn known_values() {
    let max = |n: &str| lambda(&atlas(n).unwrap());
    assert_eq!(max("K4"), 1);
    assert_eq!(max("Q"), 2);
    assert_eq!(max("K33"), 2);
    assert_eq!(max("S"), 4);
    let s = solve(&PackingProblem::factor(atlas("S").unwrap())).unwrap();
    assert_eq!(s.verdict.witness().unwrap().len(), 4);
    let oracle = oracle_solve(&PackingProblem::factor(atlas("S").unwrap())).unwrap();
    assert!(oracle.verdict.is_sat());
}

#[test]
fn witnesses_are_deterministic() {
    for seed in 0..10 {
        let g = sample_cubic(18, seed).unwrap();
        let a = solve(&PackingProblem::factor(g.clone())).unwrap().verdict;
        let b = solve(&PackingProblem::factor(g)).unwrap().verdict;
        assert_eq!(a, b);
    }
}

#[test]
fn below_third_iff_no_factor() {
    let mut graphs: Vec<Graph> = ["K33", "S", "Prism3", "Prism9"]
        .iter()
        .map(|n| atlas(n).unwrap())
        .collect();
    for seed in 0..60 {
        graphs.push(sample_cubic(6 * (1 + seed as usize % 4), seed).unwrap());
        graphs.push(random_subcubic(3 * (1 + seed as usize % 5), 500 + seed));
    }
    for g in graphs {
        let full = lambda(&g) == g.n() / 3;
        let factor = solve(&PackingProblem::factor(g.clone())).unwrap().verdict.is_sat();
        assert_eq!(full, factor, "{:?}", g.edges());
    }
}

#[test]
fn cubic_lower_bound_on_samples() {
    for i in 0..120u64 {
        let n = 8 + 2 * (i as usize % 9);
        let g = sample_cubic(n, i).unwrap();
        assert!(lambda(&g) >= n.div_ceil(4), "seed {i}, n {n}");
    }
    assert_eq!(lambda(&atlas("K4").unwrap().disjoint_union(&atlas("K4").unwrap())), 2);
}

/// Subdivides `count` random edges of a cubic graph: every degree is then
/// 2 or 3.
fn subdivided(n: usize, count: usize, seed: u64) -> Graph {
    let g = sample_cubic(n, seed).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xdead);
    let mut edges: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.0, e.1)).collect();
    let mut next = n;
    for _ in 0..count {
        let i = rng.gen_range(0..edges.len());
        let (a, b) = edges.swap_remove(i);
        edges.push((a, next));
        edges.push((next, b));
        next += 1;
    }
    Graph::from_edges(next, &edges).unwrap()
}

#[test]
fn degree_two_three_lower_bound_on_samples() {
    for i in 0..150u64 {
        let n = 4 + 2 * (i as usize % 5);
        let g = subdivided(n, 1 + i as usize % 6, i);
        let prof = g.degree_profile();
        assert!(prof.min_degree >= 2 && prof.max_degree <= 3);
        if g.components().iter().any(|c| c.len() == 5) {
            continue;
        }
        assert!(lambda(&g) >= g.n().div_ceil(4), "sample {i}: {:?}", g.edges());
    }
}

#[test]
fn clauses_hold_on_small_three_connected_cubic_graphs() {
    let mut tested = 0;
    for i in 0..60u64 {
        let n = 4 + 2 * (i as usize % 6);
        let g = sample_cubic(n, 9000 + i).unwrap();
        if !connectivity_at_least(&g, 3).unwrap().holds {
            continue;
        }
        let report = equivalence_predicates(&g, Budget::default()).unwrap();
        assert_eq!(report.residue, n % 6);
        for (clause, value) in &report.clauses {
            assert!(
                matches!(value, ClauseValue::True | ClauseValue::NotApplicable),
                "{clause} on {:?}: {value:?}",
                g.edges()
            );
        }
        tested += 1;
    }
    assert!(tested > 20);
}

#[test]
fn oracle_refuses_large_inputs() {
    assert!(oracle_solve(&PackingProblem::max_packing(atlas("Prism8").unwrap())).is_err());
    assert_eq!(Edge::new(1, 0), Edge(0, 1));
}
