use crate::error::{Error, Result};

use super::{LambdaPath, Mode, PackingProblem, PackingResult, SolveStats, Verdict};

/// Size guard for [`oracle_solve`].
pub const ORACLE_MAX_VERTICES: usize = 15;

/// Exhaustive reference solver: lists every vertex triple inducing a
/// 3-vertex path, then walks all families of pairwise disjoint triples by
/// include/exclude recursion, keeping the best family that satisfies the
/// constraints. Shares no search code with [`super::solve`].
pub fn oracle_solve(problem: &PackingProblem) -> Result<PackingResult> {
    problem.validate()?;
    let g = &problem.graph;
    let n = g.n();
    if n > ORACLE_MAX_VERTICES {
        return Err(Error::precondition(format!(
            "oracle handles at most {ORACLE_MAX_VERTICES} vertices, got {n}"
        )));
    }
    let mut adj = vec![vec![false; n]; n];
    for e in g.edges() {
        let usable = !problem.deleted_edges.contains(e) && !problem.forbidden_edges.contains(e);
        adj[e.0][e.1] = usable;
        adj[e.1][e.0] = usable;
    }
    let alive = |v: usize| !problem.deleted_vertices.contains(&v);

    let mut triples = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if !(alive(a) && alive(b) && alive(c)) {
                    continue;
                }
                for (x, mid, y) in [(b, a, c), (a, b, c), (a, c, b)] {
                    if adj[x][mid] && adj[mid][y] {
                        triples.push(LambdaPath::new(x, mid, y));
                    }
                }
            }
        }
    }

    let forced: Vec<(usize, usize)> = problem.forced_edges.iter().map(|e| (e.0, e.1)).collect();
    let need: usize = (0..n).filter(|&v| alive(v)).count();
    let mut st = State {
        triples: &triples,
        forced: &forced,
        mode: problem.mode,
        need,
        used: vec![false; n],
        chosen: Vec::new(),
        best: None,
        leaves: 0,
    };
    st.walk(0);

    let verdict = match (problem.mode, st.best) {
        (_, None) => Verdict::Unsat,
        (Mode::Factor, Some(mut w)) => {
            w.sort();
            Verdict::Sat { witness: w }
        }
        (Mode::MaxPacking, Some(mut w)) => {
            w.sort();
            Verdict::Optimum {
                value: w.len(),
                witness: w,
            }
        }
    };
    Ok(PackingResult {
        verdict,
        stats: SolveStats {
            nodes: st.leaves,
            ..SolveStats::default()
        },
    })
}

struct State<'a> {
    triples: &'a [LambdaPath],
    forced: &'a [(usize, usize)],
    mode: Mode,
    need: usize,
    used: Vec<bool>,
    chosen: Vec<LambdaPath>,
    best: Option<Vec<LambdaPath>>,
    leaves: u64,
}

impl State<'_> {
    fn walk(&mut self, i: usize) {
        if i == self.triples.len() {
            self.leaves += 1;
            self.consider();
            return;
        }
        let t = self.triples[i];
        let [a, b, c] = t.vertices();
        if !self.used[a] && !self.used[b] && !self.used[c] {
            self.used[a] = true;
            self.used[b] = true;
            self.used[c] = true;
            self.chosen.push(t);
            self.walk(i + 1);
            self.chosen.pop();
            self.used[a] = false;
            self.used[b] = false;
            self.used[c] = false;
        }
        self.walk(i + 1);
    }

    fn consider(&mut self) {
        let has = |u: usize, v: usize, p: &LambdaPath| {
            let [x, m, y] = p.vertices();
            (m == u && (x == v || y == v)) || (m == v && (x == u || y == u))
        };
        let all_forced = self
            .forced
            .iter()
            .all(|&(u, v)| self.chosen.iter().any(|p| has(u, v, p)));
        if !all_forced {
            return;
        }
        match self.mode {
            Mode::Factor => {
                if self.best.is_none() && 3 * self.chosen.len() == self.need {
                    self.best = Some(self.chosen.clone());
                }
            }
            Mode::MaxPacking => {
                if self.best.as_ref().is_none_or(|b| self.chosen.len() > b.len()) {
                    self.best = Some(self.chosen.clone());
                }
            }
        }
    }
}
