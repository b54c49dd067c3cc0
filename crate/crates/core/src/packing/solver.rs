//! Branch-and-bound over bitmask states.
//!
//! The core routine answers "can the vertices of `mask` be packed leaving at
//! most `b` uncovered?". States are split into connected components, each
//! solved on its own with the smallest slack it admits, and results are
//! memoised per mask. Within a component the branch vertex is the one with
//! fewest remaining options, ties broken by lowest id; its candidate paths
//! are tried in canonical order, followed by leaving it uncovered when slack
//! remains.

use std::collections::HashMap;
use std::time::Instant;

use crate::error::{Error, Result};

use super::paths::enumerate_paths;
use super::{LambdaPath, Mode, PackingProblem, PackingResult, SolveStats, Verdict};

/// Largest graph the solver accepts.
pub const MAX_VERTICES: usize = 128;

const MEMO_CAP: usize = 2_000_000;

type Mask = u128;

#[inline]
fn bit(v: usize) -> Mask {
    1u128 << v
}

fn ones(m: Mask) -> usize {
    m.count_ones() as usize
}

struct Aborted;

#[derive(Default)]
struct Entry {
    /// Largest slack known to be insufficient.
    fail: Option<usize>,
    /// Witness leaving the fewest vertices uncovered found so far.
    ok: Option<(usize, Vec<u32>)>,
}

struct Search<'a> {
    problem: &'a PackingProblem,
    paths: Vec<(Mask, LambdaPath)>,
    by_vertex: Vec<Vec<u32>>,
    nbr: Vec<Mask>,
    unskippable: Mask,
    seam_masks: Vec<Mask>,
    memo: HashMap<Mask, Entry>,
    stats: SolveStats,
    start: Instant,
}

impl<'a> Search<'a> {
    fn new(problem: &'a PackingProblem) -> Self {
        let g = &problem.graph;
        let n = g.n();
        let forced_at = |v: usize| problem.forced_edges.iter().filter(move |e| e.contains(v));
        let paths: Vec<(Mask, LambdaPath)> = enumerate_paths(problem)
            .into_iter()
            .filter(|p| p.vertices().iter().all(|&v| forced_at(v).all(|e| p.contains_edge(*e))))
            .map(|p| (p.vertices().iter().fold(0, |m, &v| m | bit(v)), p))
            .collect();
        let mut by_vertex = vec![Vec::new(); n];
        for (i, (_, p)) in paths.iter().enumerate() {
            for v in p.vertices() {
                by_vertex[v].push(i as u32);
            }
        }
        let mut nbr = vec![0; n];
        for e in g.edges() {
            if problem.edge_usable(*e) {
                nbr[e.0] |= bit(e.1);
                nbr[e.1] |= bit(e.0);
            }
        }
        let unskippable = problem.forced_edges.iter().fold(0, |m, e| m | bit(e.0) | bit(e.1));
        let seam_masks = problem
            .seams
            .iter()
            .map(|block| block.iter().fold(0, |m, &v| m | bit(v)))
            .collect();
        Search {
            problem,
            paths,
            by_vertex,
            nbr,
            unskippable,
            seam_masks,
            memo: HashMap::new(),
            stats: SolveStats::default(),
            start: Instant::now(),
        }
    }

    fn tick(&mut self) -> std::result::Result<(), Aborted> {
        self.stats.nodes += 1;
        let budget = &self.problem.budget;
        if self.stats.nodes > budget.max_nodes
            || (self.stats.nodes.is_multiple_of(1024) && self.start.elapsed() > budget.max_time)
        {
            return Err(Aborted);
        }
        Ok(())
    }

    fn components(&self, mask: Mask) -> Vec<Mask> {
        let mut rest = mask;
        let mut out = Vec::new();
        while rest != 0 {
            let seed = rest & rest.wrapping_neg();
            let mut comp = seed;
            let mut frontier = seed;
            while frontier != 0 {
                let v = frontier.trailing_zeros() as usize;
                frontier &= frontier - 1;
                let new = self.nbr[v] & mask & !comp;
                comp |= new;
                frontier |= new;
            }
            rest &= !comp;
            out.push(comp);
        }
        out
    }

    fn options(&self, v: usize, mask: Mask) -> usize {
        self.by_vertex[v]
            .iter()
            .filter(|&&i| self.paths[i as usize].0 & !mask == 0)
            .count()
    }

    /// A seam whose crossing edges are all dead splits the state; each side
    /// then needs its own residue of uncovered vertices.
    fn seam_prune(&mut self, mask: Mask, b: usize) -> bool {
        for &s in &self.seam_masks {
            let inside = mask & s;
            let outside = mask & !s;
            if inside == 0 || outside == 0 {
                continue;
            }
            let live = (0..self.nbr.len())
                .filter(|&v| inside & bit(v) != 0)
                .any(|v| self.nbr[v] & outside != 0);
            if !live && ones(inside) % 3 + ones(outside) % 3 > b {
                self.stats.seam_prunes += 1;
                return true;
            }
        }
        false
    }

    fn remember_fail(&mut self, mask: Mask, b: usize) {
        if self.memo.len() >= MEMO_CAP && !self.memo.contains_key(&mask) {
            return;
        }
        let e = self.memo.entry(mask).or_default();
        e.fail = Some(e.fail.map_or(b, |f| f.max(b)));
    }

    fn remember_ok(&mut self, mask: Mask, witness: &[u32]) {
        if self.memo.len() >= MEMO_CAP && !self.memo.contains_key(&mask) {
            return;
        }
        let skip = ones(mask) - 3 * witness.len();
        let e = self.memo.entry(mask).or_default();
        if e.ok.as_ref().is_none_or(|(s, _)| skip < *s) {
            e.ok = Some((skip, witness.to_vec()));
        }
    }

    /// A packing of `mask` leaving at most `b` vertices uncovered.
    fn feasible(&mut self, mask: Mask, b: usize) -> std::result::Result<Option<Vec<u32>>, Aborted> {
        if mask == 0 {
            return Ok(Some(Vec::new()));
        }
        if let Some(e) = self.memo.get(&mask) {
            if let Some((s, w)) = &e.ok {
                if *s <= b {
                    self.stats.memo_hits += 1;
                    return Ok(Some(w.clone()));
                }
            }
            if e.fail.is_some_and(|f| f >= b) {
                self.stats.memo_hits += 1;
                return Ok(None);
            }
        }
        self.tick()?;
        let found = self.search(mask, b)?;
        match &found {
            Some(w) => self.remember_ok(mask, w),
            None => self.remember_fail(mask, b),
        }
        Ok(found)
    }

    fn search(&mut self, mask: Mask, b: usize) -> std::result::Result<Option<Vec<u32>>, Aborted> {
        if ones(mask) % 3 > b {
            self.stats.parity_prunes += 1;
            return Ok(None);
        }
        if !self.seam_masks.is_empty() && self.seam_prune(mask, b) {
            return Ok(None);
        }
        let mut comps = self.components(mask);
        if comps.len() > 1 {
            self.stats.component_splits += 1;
            let lbs: usize = comps.iter().map(|&c| ones(c) % 3).sum();
            if lbs > b {
                self.stats.parity_prunes += 1;
                return Ok(None);
            }
            comps.sort_by_key(|&c| (ones(c), c.trailing_zeros()));
            let mut reserved = lbs;
            let mut used = 0;
            let mut witness = Vec::new();
            for c in comps {
                let lb = ones(c) % 3;
                reserved -= lb;
                let allowance = b - used - reserved;
                let mut t = lb;
                let mut got = None;
                while t <= allowance {
                    if let Some(w) = self.feasible(c, t)? {
                        got = Some(w);
                        break;
                    }
                    t += 3;
                }
                let Some(w) = got else { return Ok(None) };
                used += ones(c) - 3 * w.len();
                witness.extend(w);
            }
            return Ok(Some(witness));
        }

        // zero-option vertices must stay uncovered
        let mut zero: Mask = 0;
        let mut pick: Option<(usize, usize)> = None;
        let mut rest = mask;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let k = self.options(v, mask);
            if k == 0 {
                zero |= bit(v);
                continue;
            }
            if pick.is_none_or(|(_, pk)| k < pk) {
                pick = Some((v, k));
            }
        }
        if zero != 0 {
            if zero & self.unskippable != 0 || ones(zero) > b {
                return Ok(None);
            }
            return self.feasible(mask & !zero, b - ones(zero));
        }
        let (v, _) = pick.expect("non-empty mask has a vertex");
        let candidates: Vec<u32> = self.by_vertex[v]
            .iter()
            .copied()
            .filter(|&i| self.paths[i as usize].0 & !mask == 0)
            .collect();
        for i in candidates {
            if let Some(mut w) = self.feasible(mask & !self.paths[i as usize].0, b)? {
                w.push(i);
                return Ok(Some(w));
            }
        }
        if b > 0 && self.unskippable & bit(v) == 0 {
            return self.feasible(mask & !bit(v), b - 1);
        }
        Ok(None)
    }

    fn witness(&self, idx: &[u32]) -> Vec<LambdaPath> {
        let mut w: Vec<LambdaPath> = idx.iter().map(|&i| self.paths[i as usize].1).collect();
        w.sort();
        w
    }

    fn lower_residue(&self, mask: Mask) -> usize {
        self.components(mask).iter().map(|&c| ones(c) % 3).sum()
    }
}

/// Solves a packing problem exactly, or reports indeterminate once the
/// budget is spent.
///
/// Factor mode searches with zero slack. Maximum-packing mode first takes
/// any packing, then repeatedly asks for one leaving three fewer vertices
/// uncovered until that is refuted.
pub fn solve(problem: &PackingProblem) -> Result<PackingResult> {
    problem.validate()?;
    let n = problem.graph.n();
    if n > MAX_VERTICES {
        return Err(Error::precondition(format!(
            "solver handles at most {MAX_VERTICES} vertices, got {n}"
        )));
    }
    let mut s = Search::new(problem);
    let unsat_forced = problem.forced_edges.iter().any(|e| !problem.edge_usable(*e));
    let all: Mask = (0..n)
        .filter(|v| !problem.deleted_vertices.contains(v))
        .fold(0, |m, v| m | bit(v));
    let active = ones(all);

    let verdict = if unsat_forced {
        Verdict::Unsat
    } else {
        match problem.mode {
            Mode::Factor => match s.feasible(all, 0) {
                Ok(Some(w)) => Verdict::Sat { witness: s.witness(&w) },
                Ok(None) => Verdict::Unsat,
                Err(Aborted) => Verdict::Indeterminate {
                    lower_bound: None,
                    upper_bound: None,
                    witness: Vec::new(),
                },
            },
            Mode::MaxPacking => maximise(&mut s, all, active),
        }
    };
    if let Some(w) = verdict.witness() {
        debug_assert_eq!(super::verify_witness(problem, w), Ok(()));
    }
    s.stats.elapsed = s.start.elapsed();
    Ok(PackingResult {
        verdict,
        stats: s.stats,
    })
}

fn maximise(s: &mut Search<'_>, all: Mask, active: usize) -> Verdict {
    let upper = (active - s.lower_residue(all)) / 3;
    let mut best = match s.feasible(all, active) {
        Ok(Some(w)) => w,
        Ok(None) => return Verdict::Unsat,
        Err(Aborted) => {
            return Verdict::Indeterminate {
                lower_bound: None,
                upper_bound: Some(upper),
                witness: Vec::new(),
            }
        }
    };
    loop {
        if best.len() == upper {
            break;
        }
        let skip = active - 3 * best.len();
        match s.feasible(all, skip - 3) {
            Ok(Some(w)) => best = w,
            Ok(None) => break,
            Err(Aborted) => {
                return Verdict::Indeterminate {
                    lower_bound: Some(best.len()),
                    upper_bound: Some(upper),
                    witness: s.witness(&best),
                }
            }
        }
    }
    Verdict::Optimum {
        value: best.len(),
        witness: s.witness(&best),
    }
}

/// Every Λ-factor satisfying the problem's constraints, up to `limit`.
/// Plain enumeration from the lowest uncovered vertex; meant for small
/// graphs.
pub fn enumerate_factors(problem: &PackingProblem, limit: usize) -> Result<Vec<Vec<LambdaPath>>> {
    let mut p = problem.clone();
    p.mode = Mode::Factor;
    p.validate()?;
    if p.graph.n() > MAX_VERTICES {
        return Err(Error::precondition("graph too large for factor enumeration"));
    }
    let s = Search::new(&p);
    let all: Mask = (0..p.graph.n())
        .filter(|v| !p.deleted_vertices.contains(v))
        .fold(0, |m, v| m | bit(v));
    let mut out = Vec::new();
    let mut stack = Vec::new();
    fn rec(s: &Search<'_>, mask: Mask, stack: &mut Vec<u32>, out: &mut Vec<Vec<LambdaPath>>, limit: usize) {
        if out.len() >= limit {
            return;
        }
        if mask == 0 {
            out.push(s.witness(stack));
            return;
        }
        let v = mask.trailing_zeros() as usize;
        for &i in &s.by_vertex[v] {
            let pm = s.paths[i as usize].0;
            if pm & !mask == 0 {
                stack.push(i);
                rec(s, mask & !pm, stack, out, limit);
                stack.pop();
            }
        }
    }
    if !p.forced_edges.iter().any(|e| !p.edge_usable(*e)) {
        rec(&s, all, &mut stack, &mut out, limit);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::atlas;
    use crate::graph::{Edge, Graph};

    #[test]
    fn small_optima() {
        let k4 = atlas("K4").unwrap();
        let r = solve(&PackingProblem::max_packing(k4)).unwrap();
        assert_eq!(r.verdict.optimum(), Some(1));
        let path = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]).unwrap();
        assert!(solve(&PackingProblem::factor(path.clone())).unwrap().verdict.is_sat());
        let star = Graph::from_edges(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]).unwrap();
        assert!(solve(&PackingProblem::factor(star.clone())).unwrap().verdict.is_unsat());
        assert_eq!(
            solve(&PackingProblem::max_packing(star)).unwrap().verdict.optimum(),
            Some(1)
        );
    }

    #[test]
    fn forced_edge_with_deleted_endpoint_is_unsat() {
        let path = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let p = PackingProblem::max_packing(path)
            .force_edge(Edge(0, 1))
            .delete_vertex(0);
        assert!(solve(&p).unwrap().verdict.is_unsat());
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let q = atlas("Q").unwrap();
        let p = PackingProblem::max_packing(q).with_budget(super::super::Budget::nodes(1));
        assert!(solve(&p).unwrap().verdict.is_indeterminate());
    }

    #[test]
    fn factor_enumeration() {
        let path = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]).unwrap();
        assert_eq!(enumerate_factors(&PackingProblem::factor(path), 10).unwrap().len(), 1);
        let c6 = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5)]).unwrap();
        assert_eq!(enumerate_factors(&PackingProblem::factor(c6), 10).unwrap().len(), 3);
    }
}
