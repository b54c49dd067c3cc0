use super::{LambdaPath, PackingProblem};

/// All Λ-paths usable under the problem's deletions and forbidden edges,
/// ordered by center, then by end pair.
pub fn enumerate_paths(problem: &PackingProblem) -> Vec<LambdaPath> {
    let g = &problem.graph;
    let mut out = Vec::new();
    for c in 0..g.n() {
        if problem.deleted_vertices.contains(&c) {
            continue;
        }
        let nb: Vec<usize> = g
            .adj(c)
            .iter()
            .copied()
            .filter(|&w| problem.edge_usable(crate::graph::Edge::new(c, w)))
            .collect();
        for i in 0..nb.len() {
            for j in i + 1..nb.len() {
                out.push(LambdaPath::new(nb[i], c, nb[j]));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::atlas;
    use crate::graph::{Edge, Graph};

    #[test]
    fn counts() {
        let p3 = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(enumerate_paths(&PackingProblem::factor(p3)).len(), 1);
        assert_eq!(enumerate_paths(&PackingProblem::factor(atlas("K4").unwrap())).len(), 12);
    }

    #[test]
    fn paths_through_a_cube_vertex() {
        let q = atlas("Q").unwrap();
        let all = enumerate_paths(&PackingProblem::factor(q.clone()));
        for v in 0..q.n() {
            assert_eq!(all.iter().filter(|p| p.contains_vertex(v)).count(), 9);
        }
    }

    #[test]
    fn respects_constraints() {
        let k4 = atlas("K4").unwrap();
        let p = PackingProblem::max_packing(k4.clone()).delete_vertex(0);
        assert_eq!(enumerate_paths(&p).len(), 3);
        let p = PackingProblem::max_packing(k4).forbid_edge(Edge(0, 1));
        // centers 0 and 1 keep one path each, 2 and 3 keep all three
        assert_eq!(enumerate_paths(&p).len(), 8);
    }
}
