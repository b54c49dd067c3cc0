use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};
use crate::par;

use super::paths::enumerate_paths;
use super::{solve, Budget, PackingProblem, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE", tag = "value")]
pub enum ClauseValue {
    /// The residue condition of the clause does not hold for this graph.
    NotApplicable,
    True,
    False {
        counterexample: String,
    },
    Indeterminate {
        query: String,
    },
}

impl ClauseValue {
    pub fn is_true(&self) -> bool {
        matches!(self, ClauseValue::True)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub vertices: usize,
    pub residue: usize,
    pub clauses: BTreeMap<String, ClauseValue>,
}

/// One constrained factor query: a label for reports and the problem.
struct Query {
    label: String,
    problem: PackingProblem,
}

/// Evaluates the eight constrained-factor clauses on a cubic graph. Each
/// clause applies only when `v(G) mod 6` matches its hypothesis; an
/// applicable clause is the conjunction of its factor queries, which are run
/// as one batch.
pub fn equivalence_predicates(g: &Graph, budget: Budget) -> Result<EquivalenceReport> {
    if !g.is_cubic() {
        return Err(Error::precondition("clauses are defined for cubic graphs"));
    }
    let n = g.n();
    let residue = n % 6;
    let base = || PackingProblem::factor(g.clone()).with_budget(budget);
    let edges: Vec<Edge> = g.edges().to_vec();
    let q = |label: String, problem: PackingProblem| Query { label, problem };

    let mut clauses = BTreeMap::new();
    let mut run = |name: &str, applies: bool, queries: Vec<Query>| {
        let value = if applies {
            evaluate(&queries)
        } else {
            ClauseValue::NotApplicable
        };
        clauses.insert(name.to_string(), value);
    };

    let zero = residue == 0;
    run("z1", zero, vec![q("G".into(), base())]);
    run(
        "z2",
        zero,
        edges
            .iter()
            .map(|&e| q(format!("avoid {e}"), base().forbid_edge(e)))
            .collect(),
    );
    run(
        "z3",
        zero,
        edges
            .iter()
            .map(|&e| q(format!("contain {e}"), base().force_edge(e)))
            .collect(),
    );
    let pairs: Vec<Query> = if zero {
        (0..edges.len())
            .flat_map(|i| (i + 1..edges.len()).map(move |j| (i, j)))
            .map(|(i, j)| {
                let (e, f) = (edges[i], edges[j]);
                q(format!("delete {e}, {f}"), base().delete_edge(e).delete_edge(f))
            })
            .collect()
    } else {
        Vec::new()
    };
    run("z4", zero, pairs);
    let lambdas = if zero { enumerate_paths(&base()) } else { Vec::new() };
    run(
        "z5",
        zero,
        lambdas
            .iter()
            .map(|l| {
                let p = l.vertices().iter().fold(base(), |p, &v| p.delete_vertex(v));
                q(format!("delete path {l}"), p)
            })
            .collect(),
    );
    run(
        "t2",
        residue == 2,
        edges
            .iter()
            .map(|&e| {
                q(
                    format!("delete ends of {e}"),
                    base().delete_vertex(e.0).delete_vertex(e.1),
                )
            })
            .collect(),
    );
    let four = residue == 4;
    run(
        "f1",
        four,
        (0..n)
            .map(|x| q(format!("delete {x}"), base().delete_vertex(x)))
            .collect(),
    );
    let mixed: Vec<Query> = if four {
        (0..n)
            .flat_map(|x| edges.iter().map(move |&e| (x, e)))
            .map(|(x, e)| q(format!("delete {x} and {e}"), base().delete_vertex(x).delete_edge(e)))
            .collect()
    } else {
        Vec::new()
    };
    run("f2", four, mixed);

    Ok(EquivalenceReport {
        vertices: n,
        residue,
        clauses,
    })
}

fn evaluate(queries: &[Query]) -> ClauseValue {
    let verdicts = par::map(queries, |q| solve(&q.problem).map(|r| r.verdict));
    for (q, v) in queries.iter().zip(verdicts) {
        match v {
            Ok(Verdict::Sat { .. }) => {}
            Ok(Verdict::Indeterminate { .. }) => return ClauseValue::Indeterminate { query: q.label.clone() },
            Ok(_) | Err(_) => {
                return ClauseValue::False {
                    counterexample: q.label.clone(),
                }
            }
        }
    }
    ClauseValue::True
}
