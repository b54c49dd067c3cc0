use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::constructions::dsl::{EdgeRef, FactSpec};
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};
use crate::packing::{Budget, PackingProblem};

/// Hex SHA-256 of the vertex count, the sorted edge list and the vertex
/// labels. Two graphs share a hash exactly when they are the same labelled
/// graph.
pub fn graph_hash(g: &Graph) -> String {
    let mut h = Sha256::new();
    h.update(format!("n:{};", g.n()));
    for e in g.edges() {
        h.update(format!("{}-{},", e.0, e.1));
    }
    h.update(";l:");
    for l in g.labels() {
        h.update(l.len().to_le_bytes());
        h.update(l.as_bytes());
    }
    hex::encode(h.finalize())
}

/// The five claim forms. Each asserts that a constrained factor problem on
/// the subject graph has no solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FactKind {
    NoFactorContaining,
    NoFactorAvoiding,
    NoFactorMinusVertex,
    NoFactorMinusVertexAvoiding,
    NoFactor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    Vertex,
    Edge,
}

impl FactKind {
    pub const ALL: [FactKind; 5] = [
        FactKind::NoFactorContaining,
        FactKind::NoFactorAvoiding,
        FactKind::NoFactorMinusVertex,
        FactKind::NoFactorMinusVertexAvoiding,
        FactKind::NoFactor,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FactKind::NoFactorContaining => "NoFactorContaining",
            FactKind::NoFactorAvoiding => "NoFactorAvoiding",
            FactKind::NoFactorMinusVertex => "NoFactorMinusVertex",
            FactKind::NoFactorMinusVertexAvoiding => "NoFactorMinusVertexAvoiding",
            FactKind::NoFactor => "NoFactor",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }

    fn slots(self) -> &'static [Slot] {
        match self {
            FactKind::NoFactorContaining | FactKind::NoFactorAvoiding => &[Slot::Edge],
            FactKind::NoFactorMinusVertex => &[Slot::Vertex],
            FactKind::NoFactorMinusVertexAvoiding => &[Slot::Vertex, Slot::Edge],
            FactKind::NoFactor => &[],
        }
    }
}

impl fmt::Display for FactKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A fact parameter, stored by vertex labels of the subject graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Param {
    Vertex(String),
    /// End labels, ordered by vertex id.
    Edge([String; 2]),
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::Vertex(v) => f.write_str(v),
            Param::Edge([a, b]) => write!(f, "{a}-{b}"),
        }
    }
}

/// A parameter resolved to ids in the subject graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resolved {
    Vertex(usize),
    Edge(Edge),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Fact {
    pub kind: FactKind,
    /// Hash of the subject graph.
    pub graph: String,
    /// Binding name of the subject, for display only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subject: Option<String>,
    pub vertices: usize,
    /// `vertices mod 6`.
    pub residue: usize,
    pub params: Vec<Param>,
}

impl Fact {
    pub fn new(kind: FactKind, g: &Graph, subject: Option<&str>, params: &[Resolved]) -> Result<Fact> {
        let shape = kind.slots();
        if shape.len() != params.len() {
            return Err(Error::input(format!(
                "{kind} takes {} parameter(s), got {}",
                shape.len(),
                params.len()
            )));
        }
        let mut out = Vec::new();
        for (slot, p) in shape.iter().zip(params) {
            out.push(match (slot, *p) {
                (Slot::Vertex, Resolved::Vertex(v)) if v < g.n() => Param::Vertex(g.label(v).to_string()),
                (Slot::Edge, Resolved::Edge(e)) if g.has_edge(e.0, e.1) => {
                    Param::Edge([g.label(e.0).to_string(), g.label(e.1).to_string()])
                }
                _ => return Err(Error::input(format!("bad parameter for {kind}"))),
            });
        }
        Ok(Fact {
            kind,
            graph: graph_hash(g),
            subject: subject.map(str::to_string),
            vertices: g.n(),
            residue: g.n() % 6,
            params: out,
        })
    }

    /// Builds a fact from a script directive; `g` is the graph bound to
    /// `spec.graph`.
    pub fn from_spec(spec: &FactSpec, g: &Graph) -> Result<Fact> {
        let kind =
            FactKind::parse(&spec.kind).ok_or_else(|| Error::input(format!("unknown fact kind `{}`", spec.kind)))?;
        let slots = kind.slots();
        if slots.len() != spec.params.len() {
            return Err(Error::input(format!(
                "{kind} takes {} parameter(s), got {}",
                slots.len(),
                spec.params.len()
            )));
        }
        let lookup = |name: &str| {
            g.resolve_vertex(name).ok_or_else(|| Error::Resolve {
                path: format!("{kind}({})", spec.graph),
                message: format!("no vertex named `{name}`"),
            })
        };
        let mut params = Vec::new();
        for (slot, p) in slots.iter().zip(&spec.params) {
            params.push(match (slot, p) {
                (Slot::Vertex, EdgeRef::Named(v)) => Resolved::Vertex(lookup(v)?),
                (Slot::Edge, EdgeRef::Named(n)) => {
                    Resolved::Edge(g.edge_by_label(n).ok_or_else(|| Error::Resolve {
                        path: format!("{kind}({})", spec.graph),
                        message: format!("no edge named `{n}`"),
                    })?)
                }
                (Slot::Edge, EdgeRef::Ends(a, b)) => {
                    let (a, b) = (lookup(a)?, lookup(b)?);
                    if !g.has_edge(a, b) {
                        return Err(Error::input(format!("{p} is not an edge of {}", spec.graph)));
                    }
                    Resolved::Edge(Edge::new(a, b))
                }
                (Slot::Vertex, EdgeRef::Ends(..)) => {
                    return Err(Error::input(format!("{kind} expects a vertex, got edge {p}")))
                }
            });
        }
        Fact::new(kind, g, Some(&spec.graph), &params)
    }

    /// Resolves the parameters against `g`, checking that `g` is the subject.
    pub fn resolve(&self, g: &Graph) -> Result<Vec<Resolved>> {
        if graph_hash(g) != self.graph {
            return Err(Error::certificate(format!("{self}: subject hash mismatch")));
        }
        if self.vertices != g.n() || self.residue != g.n() % 6 {
            return Err(Error::certificate(format!(
                "{self}: records v = {} (mod 6: {}), subject has {}",
                self.vertices,
                self.residue,
                g.n()
            )));
        }
        let slots = self.kind.slots();
        if slots.len() != self.params.len() {
            return Err(Error::certificate(format!("{self}: wrong parameter count")));
        }
        let find = |l: &str| {
            g.vertex_by_label(l)
                .ok_or_else(|| Error::certificate(format!("{self}: no vertex labelled `{l}`")))
        };
        slots
            .iter()
            .zip(&self.params)
            .map(|(slot, p)| match (slot, p) {
                (Slot::Vertex, Param::Vertex(v)) => Ok(Resolved::Vertex(find(v)?)),
                (Slot::Edge, Param::Edge([a, b])) => {
                    let (a, b) = (find(a)?, find(b)?);
                    if !g.has_edge(a, b) {
                        return Err(Error::certificate(format!("{self}: {p} is not an edge")));
                    }
                    Ok(Resolved::Edge(Edge::new(a, b)))
                }
                _ => Err(Error::certificate(format!("{self}: parameter {p} has the wrong type"))),
            })
            .collect()
    }

    /// The factor problem whose infeasibility is the fact.
    pub fn problem(&self, g: &Graph, budget: Budget) -> Result<PackingProblem> {
        let params = self.resolve(g)?;
        let mut p = PackingProblem::factor(g.clone()).with_budget(budget);
        for (i, r) in params.into_iter().enumerate() {
            p = match (self.kind, i, r) {
                (FactKind::NoFactorContaining, _, Resolved::Edge(e)) => p.force_edge(e),
                (FactKind::NoFactorAvoiding, _, Resolved::Edge(e)) => p.forbid_edge(e),
                (FactKind::NoFactorMinusVertexAvoiding, 1, Resolved::Edge(e)) => p.forbid_edge(e),
                (_, _, Resolved::Vertex(v)) => p.delete_vertex(v),
                _ => unreachable!("slots checked by resolve"),
            };
        }
        if !p.active_vertices().is_multiple_of(3) {
            return Err(Error::precondition(format!(
                "{self}: {} vertices remain, not divisible by 3",
                p.active_vertices()
            )));
        }
        Ok(p)
    }

    /// Same kind, subject and parameters.
    pub fn same_claim(&self, other: &Fact) -> bool {
        self.kind == other.kind && self.graph == other.graph && self.params == other.params
    }
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let subject = match &self.subject {
            Some(s) => s.clone(),
            None => format!("#{}", &self.graph[..self.graph.len().min(8)]),
        };
        write!(f, "{}({subject}", self.kind)?;
        for p in &self.params {
            write!(f, ", {p}")?;
        }
        f.write_str(")")
    }
}
