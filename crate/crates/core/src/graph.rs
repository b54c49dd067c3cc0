//! Immutable simple undirected graphs with provenance labels.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An undirected edge stored with its smaller endpoint first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge(pub usize, pub usize);

impl Edge {
    pub fn new(a: usize, b: usize) -> Self {
        if a <= b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn contains(self, v: usize) -> bool {
        self.0 == v || self.1 == v
    }

    /// The endpoint opposite to `v`, if `v` is an endpoint.
    pub fn other(self, v: usize) -> Option<usize> {
        if self.0 == v {
            Some(self.1)
        } else if self.1 == v {
            Some(self.0)
        } else {
            None
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

/// A simple undirected graph on the dense vertex ids `0..n`.
///
/// Every vertex carries a provenance label (for example `A.z1`, meaning
/// vertex `z1` of the left operand of a binary construction). Edges may
/// additionally carry a name, which is how constructions mark distinguished
/// edges such as the middle edge of a bridge.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
    labels: Vec<String>,
    edge_labels: BTreeMap<Edge, String>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges.len())
            .finish()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeProfile {
    pub min_degree: usize,
    pub max_degree: usize,
    /// `histogram[d]` is the number of vertices of degree `d`.
    pub histogram: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CutReport {
    pub edges: Vec<Edge>,
}

impl CutReport {
    pub fn size(&self) -> usize {
        self.edges.len()
    }
}

impl Graph {
    /// Builds a graph, rejecting loops, parallel edges and out-of-range ids.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>, labels: Vec<String>) -> Result<Self> {
        if labels.len() != n {
            return Err(Error::input(format!("expected {n} labels, got {}", labels.len())));
        }
        let mut list = Vec::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::input(format!("edge {a}-{b} out of range for n = {n}")));
            }
            if a == b {
                return Err(Error::input(format!("loop at vertex {a}")));
            }
            list.push(Edge::new(a, b));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::input(format!("parallel edge {}", w[0])));
        }
        let mut adj = vec![Vec::new(); n];
        for e in &list {
            adj[e.0].push(e.1);
            adj[e.1].push(e.0);
        }
        for row in &mut adj {
            row.sort_unstable();
        }
        Ok(Graph {
            n,
            edges: list,
            adj,
            labels,
            edge_labels: BTreeMap::new(),
        })
    }

    /// Builds a graph whose labels are the decimal vertex ids.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::new(n, edges.iter().copied(), (0..n).map(|i| i.to_string()).collect())
    }

    pub fn with_edge_labels(mut self, labels: impl IntoIterator<Item = (Edge, String)>) -> Result<Self> {
        for (e, name) in labels {
            if !self.has_edge(e.0, e.1) {
                return Err(Error::input(format!("edge label {name} on missing edge {e}")));
            }
            self.edge_labels.insert(e, name);
        }
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in ascending order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn edge_labels(&self) -> &BTreeMap<Edge, String> {
        &self.edge_labels
    }

    pub fn edge_label(&self, e: Edge) -> Option<&str> {
        self.edge_labels.get(&e).map(String::as_str)
    }

    pub fn vertex_by_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn edge_by_label(&self, name: &str) -> Option<Edge> {
        self.edge_labels.iter().find(|(_, l)| *l == name).map(|(e, _)| *e)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.n && self.adj[a].binary_search(&b).is_ok()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Neighbours of `v` in ascending order.
    pub fn neighbors(&self, v: usize) -> Result<&[usize]> {
        self.adj
            .get(v)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::input(format!("vertex {v} out of range for n = {}", self.n)))
    }

    pub(crate) fn adj(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree_profile(&self) -> DegreeProfile {
        let max_degree = self.adj.iter().map(Vec::len).max().unwrap_or(0);
        let min_degree = self.adj.iter().map(Vec::len).min().unwrap_or(0);
        let mut histogram = vec![0; max_degree + 1];
        for row in &self.adj {
            histogram[row.len()] += 1;
        }
        DegreeProfile {
            min_degree,
            max_degree,
            histogram,
        }
    }

    pub fn is_cubic(&self) -> bool {
        self.adj.iter().all(|row| row.len() == 3)
    }

    /// The edges with exactly one endpoint in `set`.
    pub fn edge_cut(&self, set: &[usize]) -> Result<CutReport> {
        let inside = self.membership(set)?;
        let edges = self
            .edges
            .iter()
            .copied()
            .filter(|e| inside[e.0] != inside[e.1])
            .collect();
        Ok(CutReport { edges })
    }

    pub(crate) fn membership(&self, set: &[usize]) -> Result<Vec<bool>> {
        let mut inside = vec![false; self.n];
        for &v in set {
            if v >= self.n {
                return Err(Error::input(format!("vertex {v} out of range for n = {}", self.n)));
            }
            inside[v] = true;
        }
        Ok(inside)
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        self.components_avoiding(&vec![false; self.n])
    }

    /// Components of the graph with the `removed` vertices deleted.
    pub(crate) fn components_avoiding(&self, removed: &[bool]) -> Vec<Vec<usize>> {
        let mut seen = removed.to_vec();
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            queue.push_back(s);
            let mut comp = Vec::new();
            while let Some(v) = queue.pop_front() {
                comp.push(v);
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// A proper 2-colouring (`false`/`true` per vertex) if one exists.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let mut color: Vec<Option<bool>> = vec![None; self.n];
        let mut queue = VecDeque::new();
        for s in 0..self.n {
            if color[s].is_some() {
                continue;
            }
            color[s] = Some(false);
            queue.push_back(s);
            while let Some(v) = queue.pop_front() {
                let c = color[v].unwrap();
                for &w in &self.adj[v] {
                    match color[w] {
                        None => {
                            color[w] = Some(!c);
                            queue.push_back(w);
                        }
                        Some(cw) if cw == c => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(color.into_iter().map(Option::unwrap).collect())
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }

    /// The subgraph induced on the vertices not in `removed`, with the kept
    /// vertices renumbered in ascending order. Returns the new graph and the
    /// map from new ids to old ids.
    pub fn without_vertices(&self, removed: &[usize]) -> Result<(Graph, Vec<usize>)> {
        let gone = self.membership(removed)?;
        let keep: Vec<usize> = (0..self.n).filter(|&v| !gone[v]).collect();
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| !gone[e.0] && !gone[e.1])
            .map(|e| (index[e.0], index[e.1]));
        let labels = keep.iter().map(|&v| self.labels[v].clone()).collect();
        let g = Graph::new(keep.len(), edges, labels)?;
        let edge_labels = self
            .edge_labels
            .iter()
            .filter(|(e, _)| !gone[e.0] && !gone[e.1])
            .map(|(e, l)| (Edge::new(index[e.0], index[e.1]), l.clone()));
        Ok((g.with_edge_labels(edge_labels)?, keep))
    }

    /// The spanning subgraph with the listed edges removed.
    pub fn without_edges(&self, removed: &[Edge]) -> Result<Graph> {
        for e in removed {
            if !self.has_edge(e.0, e.1) {
                return Err(Error::input(format!("edge {e} not in graph")));
            }
        }
        let edges = self.edges.iter().filter(|e| !removed.contains(e)).map(|e| (e.0, e.1));
        let g = Graph::new(self.n, edges, self.labels.clone())?;
        let edge_labels = self
            .edge_labels
            .iter()
            .filter(|(e, _)| !removed.contains(e))
            .map(|(e, l)| (*e, l.clone()));
        g.with_edge_labels(edge_labels)
    }

    /// Relabels every vertex and edge name as `prefix.name`.
    pub fn prefixed(&self, prefix: &str) -> Graph {
        let mut g = self.clone();
        for l in &mut g.labels {
            *l = format!("{prefix}.{l}");
        }
        for l in g.edge_labels.values_mut() {
            *l = format!("{prefix}.{l}");
        }
        g
    }

    /// Vertex-disjoint union; `other`'s ids are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.n;
        let edges = self
            .edges
            .iter()
            .map(|e| (e.0, e.1))
            .chain(other.edges.iter().map(|e| (e.0 + shift, e.1 + shift)));
        let labels = self.labels.iter().chain(other.labels.iter()).cloned().collect();
        let g = Graph::new(self.n + other.n, edges, labels).expect("union of simple graphs is simple");
        let edge_labels = self.edge_labels.iter().map(|(e, l)| (*e, l.clone())).chain(
            other
                .edge_labels
                .iter()
                .map(|(e, l)| (Edge(e.0 + shift, e.1 + shift), l.clone())),
        );
        g.with_edge_labels(edge_labels).expect("edge labels carried over")
    }

    /// Resolves a vertex by label, falling back to a decimal id.
    pub fn resolve_vertex(&self, name: &str) -> Option<usize> {
        self.vertex_by_label(name)
            .or_else(|| name.parse::<usize>().ok().filter(|&v| v < self.n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4() -> Graph {
        Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn rejects_loops_and_parallel_edges() {
        assert!(Graph::from_edges(2, &[(0, 0)]).is_err());
        assert!(Graph::from_edges(2, &[(0, 1), (1, 0)]).is_err());
        assert!(Graph::from_edges(2, &[(0, 2)]).is_err());
        assert!(Graph::new(2, [(0, 1)], vec!["a".into()]).is_err());
    }

    #[test]
    fn neighbor_lists() {
        let k2 = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(k2.neighbors(0).unwrap(), &[1]);
        assert_eq!(k4().neighbors(2).unwrap(), &[0, 1, 3]);
        assert!(k4().neighbors(4).is_err());
    }

    #[test]
    fn cuts() {
        let g = k4();
        assert_eq!(g.edge_cut(&[]).unwrap().size(), 0);
        assert_eq!(g.edge_cut(&[0, 1, 2, 3]).unwrap().size(), 0);
        assert_eq!(g.edge_cut(&[0]).unwrap().size(), 3);
        assert_eq!(g.edge_cut(&[0, 1]).unwrap().size(), 4);
        assert!(g.edge_cut(&[7]).is_err());
    }

    #[test]
    fn components_of_small_graphs() {
        let empty = Graph::from_edges(3, &[]).unwrap();
        assert_eq!(empty.components().len(), 3);
        let two = k4().disjoint_union(&k4());
        assert_eq!(two.components(), vec![vec![0, 1, 2, 3], vec![4, 5, 6, 7]]);
    }

    #[test]
    fn degree_profile_sums() {
        let p3 = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let prof = p3.degree_profile();
        assert_eq!(prof.min_degree, 1);
        assert_eq!(prof.max_degree, 2);
        assert_eq!(prof.histogram, vec![0, 2, 1]);
        assert!(k4().is_cubic());
        assert!(!p3.is_cubic());
    }

    #[test]
    fn bipartite_witness() {
        assert!(k4().bipartition().is_none());
        let c4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let col = c4.bipartition().unwrap();
        for e in c4.edges() {
            assert_ne!(col[e.0], col[e.1]);
        }
    }

    #[test]
    fn induced_subgraph_keeps_labels() {
        let g = k4().with_edge_labels([(Edge(2, 3), "z".to_string())]).unwrap();
        let (h, map) = g.without_vertices(&[0]).unwrap();
        assert_eq!(map, vec![1, 2, 3]);
        assert_eq!(h.labels(), &["1", "2", "3"]);
        assert_eq!(h.edge_by_label("z"), Some(Edge(1, 2)));
        assert_eq!(h.edge_count(), 3);
    }
}
