use super::{LambdaPath, Mode, PackingProblem};

/// Re-checks a witness against the problem from scratch: every path exists
/// and avoids deleted or forbidden items, paths are vertex-disjoint, every
/// forced edge is used and, in factor mode, every active vertex is covered.
pub fn verify_witness(problem: &PackingProblem, witness: &[LambdaPath]) -> Result<(), String> {
    let g = &problem.graph;
    let mut covered = vec![false; g.n()];
    for p in witness {
        let [a, c, b] = p.vertices();
        if a == c || b == c || a == b {
            return Err(format!("path {p} repeats a vertex"));
        }
        for e in p.edges() {
            if !g.has_edge(e.0, e.1) {
                return Err(format!("path {p} uses non-edge {e}"));
            }
            if !problem.edge_usable(e) {
                return Err(format!("path {p} uses deleted or forbidden edge {e}"));
            }
        }
        for v in p.vertices() {
            if covered[v] {
                return Err(format!("vertex {v} covered twice"));
            }
            covered[v] = true;
        }
    }
    for e in &problem.forced_edges {
        if !witness.iter().any(|p| p.contains_edge(*e)) {
            return Err(format!("forced edge {e} not covered"));
        }
    }
    if problem.mode == Mode::Factor {
        if let Some(v) = (0..g.n()).find(|v| !covered[*v] && !problem.deleted_vertices.contains(v)) {
            return Err(format!("vertex {v} not covered"));
        }
    }
    Ok(())
}
