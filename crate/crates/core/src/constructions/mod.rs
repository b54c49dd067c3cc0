//! Graph composition operators with explicit port bookkeeping.
//!
//! Every operator lays out the result deterministically: surviving vertices
//! of the first operand keep their relative order and come first, then the
//! second operand's, then any new vertices. Operand labels are prefixed with
//! `A.`/`B.` (binary operators) or `Y1.`/`Y2.`/`Y3.` (the Y-merge), so every
//! composite vertex records where it came from.

pub mod atlas;
pub mod dsl;
pub mod pipeline;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};

pub use atlas::{atlas, prism, ATLAS_NAMES};

/// A degree-3 vertex with an ordered triple of its neighbours.
///
/// Aligning the port triples of two vertices fixes the bijection between
/// their neighbourhoods: port `i` of one side is joined to port `i` of the
/// other.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PortedVertex {
    pub vertex: usize,
    pub ports: [usize; 3],
}

impl PortedVertex {
    pub fn new(g: &Graph, vertex: usize, ports: [usize; 3]) -> Result<Self> {
        let nb = g.neighbors(vertex)?;
        if nb.len() != 3 {
            return Err(Error::construction(format!(
                "vertex {} has degree {}, expected 3",
                g.label(vertex),
                nb.len()
            )));
        }
        let mut sorted = ports;
        sorted.sort_unstable();
        if sorted != nb {
            return Err(Error::construction(format!(
                "ports {ports:?} are not a permutation of the neighbours of {}",
                g.label(vertex)
            )));
        }
        Ok(PortedVertex { vertex, ports })
    }

    /// Ports in ascending id order.
    pub fn ascending(g: &Graph, vertex: usize) -> Result<Self> {
        Self::with_leading(g, vertex, &[])
    }

    /// The given leading ports, followed by the remaining neighbours in
    /// ascending id order.
    pub fn with_leading(g: &Graph, vertex: usize, leading: &[usize]) -> Result<Self> {
        let nb = g.neighbors(vertex)?;
        if nb.len() != 3 {
            return Err(Error::construction(format!(
                "vertex {} has degree {}, expected 3",
                g.label(vertex),
                nb.len()
            )));
        }
        if leading.len() > 3 {
            return Err(Error::construction("at most three ports"));
        }
        let mut ports: Vec<usize> = leading.to_vec();
        ports.extend(nb.iter().copied().filter(|w| !leading.contains(w)));
        if ports.len() != 3 {
            return Err(Error::construction(format!(
                "ports {leading:?} are not distinct neighbours of {}",
                g.label(vertex)
            )));
        }
        Self::new(g, vertex, [ports[0], ports[1], ports[2]])
    }
}

/// An edge with a declared orientation `tail -> head`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PortedEdge {
    pub tail: usize,
    pub head: usize,
}

impl PortedEdge {
    pub fn new(g: &Graph, tail: usize, head: usize) -> Result<Self> {
        if tail == head || !g.has_edge(tail, head) {
            return Err(Error::construction(format!("{tail}-{head} is not an edge")));
        }
        Ok(PortedEdge { tail, head })
    }

    pub fn edge(self) -> Edge {
        Edge::new(self.tail, self.head)
    }
}

/// Copies `g` minus the `skip` vertices and the `skip_edge` into the builder,
/// returning the id map (usize::MAX for dropped vertices).
fn copy_into(
    b: &mut Builder,
    g: &Graph,
    prefix: &str,
    skip_vertex: Option<usize>,
    skip_edge: Option<Edge>,
) -> Vec<usize> {
    let mut map = vec![usize::MAX; g.n()];
    for (v, slot) in map.iter_mut().enumerate() {
        if Some(v) != skip_vertex {
            *slot = b.vertex(format!("{prefix}.{}", g.label(v)));
        }
    }
    for e in g.edges() {
        if Some(*e) == skip_edge || map[e.0] == usize::MAX || map[e.1] == usize::MAX {
            continue;
        }
        let name = g.edge_label(*e).map(|l| format!("{prefix}.{l}"));
        b.edge(map[e.0], map[e.1], name);
    }
    map
}

#[derive(Default)]
struct Builder {
    labels: Vec<String>,
    edges: Vec<(usize, usize)>,
    names: Vec<(Edge, String)>,
}

impl Builder {
    fn vertex(&mut self, label: String) -> usize {
        self.labels.push(label);
        self.labels.len() - 1
    }

    fn edge(&mut self, a: usize, b: usize, name: Option<String>) {
        self.edges.push((a, b));
        if let Some(name) = name {
            self.names.push((Edge::new(a, b), name));
        }
    }

    fn finish(self) -> Result<Graph> {
        Graph::new(self.labels.len(), self.edges, self.labels)?.with_edge_labels(self.names)
    }
}

/// Replaces vertex `b` of `B` by `A - a`, joining port `i` of `a` to port
/// `i` of `b`. The three new edges are named `p1`, `p2`, `p3`.
pub fn vsub(ga: &Graph, a: &PortedVertex, gb: &Graph, b: &PortedVertex) -> Result<Graph> {
    let a = PortedVertex::new(ga, a.vertex, a.ports)?;
    let b = PortedVertex::new(gb, b.vertex, b.ports)?;
    let mut out = Builder::default();
    let ma = copy_into(&mut out, ga, "A", Some(a.vertex), None);
    let mb = copy_into(&mut out, gb, "B", Some(b.vertex), None);
    for i in 0..3 {
        out.edge(ma[a.ports[i]], mb[b.ports[i]], Some(format!("p{}", i + 1)));
    }
    out.finish()
}

/// Joins `A^i - a^i` for `i = 1, 2, 3` through three new vertices
/// `z1, z2, z3`, with `z_j` adjacent to port `j` of every `a^i`.
pub fn ymerge3(parts: [(&Graph, &PortedVertex); 3]) -> Result<Graph> {
    let mut out = Builder::default();
    let mut ports = Vec::new();
    for (i, (g, a)) in parts.iter().enumerate() {
        let a = PortedVertex::new(g, a.vertex, a.ports)?;
        let map = copy_into(&mut out, g, &format!("Y{}", i + 1), Some(a.vertex), None);
        ports.push(a.ports.map(|p| map[p]));
    }
    let z: Vec<usize> = (1..=3).map(|j| out.vertex(format!("z{j}"))).collect();
    for p in &ports {
        for j in 0..3 {
            out.edge(z[j], p[j], None);
        }
    }
    out.finish()
}

/// The Y-merge of three copies of `(A, a)`.
pub fn ymerge(g: &Graph, a: &PortedVertex) -> Result<Graph> {
    ymerge3([(g, a), (g, a), (g, a)])
}

/// Removes edge `a` from `A` and `b` from `B` and adds `a.tail b.tail` and
/// `a.head b.head`, named `n1` and `n2`.
pub fn esub(ga: &Graph, a: &PortedEdge, gb: &Graph, b: &PortedEdge) -> Result<Graph> {
    let a = PortedEdge::new(ga, a.tail, a.head)?;
    let b = PortedEdge::new(gb, b.tail, b.head)?;
    let mut out = Builder::default();
    let ma = copy_into(&mut out, ga, "A", None, Some(a.edge()));
    let mb = copy_into(&mut out, gb, "B", None, Some(b.edge()));
    out.edge(ma[a.tail], mb[b.tail], Some("n1".into()));
    out.edge(ma[a.head], mb[b.head], Some("n2".into()));
    out.finish()
}

/// Like [`esub`], but each new edge is subdivided by a vertex `z1`/`z2` and
/// the two are joined by the middle edge `z`, which is also returned.
pub fn ebridge(ga: &Graph, a: &PortedEdge, gb: &Graph, b: &PortedEdge) -> Result<(Graph, Edge)> {
    let a = PortedEdge::new(ga, a.tail, a.head)?;
    let b = PortedEdge::new(gb, b.tail, b.head)?;
    let mut out = Builder::default();
    let ma = copy_into(&mut out, ga, "A", None, Some(a.edge()));
    let mb = copy_into(&mut out, gb, "B", None, Some(b.edge()));
    let z1 = out.vertex("z1".into());
    let z2 = out.vertex("z2".into());
    out.edge(ma[a.tail], z1, None);
    out.edge(z1, mb[b.tail], None);
    out.edge(ma[a.head], z2, None);
    out.edge(z2, mb[b.head], None);
    out.edge(z1, z2, Some("z".into()));
    Ok((out.finish()?, Edge::new(z1, z2)))
}

/// Vertex sets of the operand blocks recorded in the labels of a composite:
/// for every label prefix ending in an operand tag (`A`, `B`, `Y1`, `Y2`,
/// `Y3`), the vertices carrying that prefix. Sets are returned sorted and
/// deduplicated; the whole vertex set is never included.
pub fn provenance_blocks(g: &Graph) -> Vec<Vec<usize>> {
    use std::collections::BTreeMap;
    let mut blocks: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (v, label) in g.labels().iter().enumerate() {
        let parts: Vec<&str> = label.split('.').collect();
        for k in 0..parts.len().saturating_sub(1) {
            if matches!(parts[k], "A" | "B" | "Y1" | "Y2" | "Y3") {
                blocks.entry(parts[..=k].join(".")).or_default().push(v);
            } else {
                break;
            }
        }
    }
    let mut sets: Vec<Vec<usize>> = blocks.into_values().filter(|s| s.len() < g.n()).collect();
    sets.sort();
    sets.dedup();
    sets
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connectivity::connectivity_at_least;

    fn k4() -> Graph {
        atlas("K4").unwrap()
    }

    #[test]
    fn vsub_of_two_k4_is_the_prism() {
        let g = k4();
        let a = PortedVertex::ascending(&g, 0).unwrap();
        let h = vsub(&g, &a, &g, &a).unwrap();
        assert_eq!(h.n(), 6);
        assert_eq!(h.edge_count(), 9);
        assert!(h.is_cubic());
        // two disjoint triangles joined by a perfect matching
        let tri = |s: usize| h.has_edge(s, s + 1) && h.has_edge(s + 1, s + 2) && h.has_edge(s, s + 2);
        assert!(tri(0) && tri(3));
        assert!(connectivity_at_least(&h, 3).unwrap().holds);
        assert_eq!(h.edge_by_label("p1"), Some(Edge(0, 3)));
    }

    #[test]
    fn ports_must_be_neighbours() {
        let g = k4();
        assert!(PortedVertex::new(&g, 0, [1, 2, 2]).is_err());
        assert!(PortedVertex::new(&g, 0, [1, 2, 0]).is_err());
        assert_eq!(PortedVertex::with_leading(&g, 0, &[3]).unwrap().ports, [3, 1, 2]);
        let p3 = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(PortedVertex::ascending(&p3, 1).is_err());
    }

    #[test]
    fn ymerge_counts() {
        let g = k4();
        let a = PortedVertex::ascending(&g, 3).unwrap();
        let y = ymerge(&g, &a).unwrap();
        assert_eq!(y.n(), 12);
        assert!(y.is_cubic());
        assert_eq!(y.label(0), "Y1.0");
        assert_eq!(y.label(9), "z1");
        for block in provenance_blocks(&y) {
            assert_eq!(y.edge_cut(&block).unwrap().size(), 3);
        }
    }

    #[test]
    fn esub_and_ebridge_counts() {
        let g = k4();
        let e = PortedEdge::new(&g, 0, 1).unwrap();
        let s = esub(&g, &e, &g, &e).unwrap();
        assert_eq!(s.n(), 8);
        assert!(s.is_cubic());
        assert_eq!(s.edge_by_label("n1"), Some(Edge(0, 4)));
        let (b, z) = ebridge(&g, &e, &g, &e).unwrap();
        assert_eq!(b.n(), 10);
        assert!(b.is_cubic());
        assert_eq!(z, Edge(8, 9));
        assert_eq!(b.edge_by_label("z"), Some(z));
        assert!(PortedEdge::new(&g, 0, 0).is_err());
    }
}
