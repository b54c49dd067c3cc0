//! Λ-packings: vertex-disjoint 3-vertex paths.
//!
//! A [`PackingProblem`] is a graph plus constraints (deleted vertices and
//! edges, edges every solution must use, edges it must avoid) and a mode:
//! decide whether a Λ-factor exists, or find a maximum packing. [`solve`]
//! is the exact branch-and-bound solver, [`oracle_solve`] an independent
//! exhaustive enumeration for small graphs.

mod crossing;
mod oracle;
mod paths;
mod predicates;
mod sample;
mod solver;
mod verify;

use std::collections::BTreeSet;
use std::fmt;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};
use crate::io::GraphJson;

pub use crossing::{bundle_size, crossing_pattern, CrossingCase, CrossingReport, ReferenceSide};
pub use oracle::{oracle_solve, ORACLE_MAX_VERTICES};
pub use paths::enumerate_paths;
pub use predicates::{equivalence_predicates, ClauseValue, EquivalenceReport};
pub use sample::{random_subcubic, sample_cubic, sample_cubic_batch};
pub use solver::{enumerate_factors, solve, MAX_VERTICES};
pub use verify::verify_witness;

/// A 3-vertex path `ends.0 - center - ends.1` with `ends.0 < ends.1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LambdaPath {
    pub center: usize,
    pub ends: (usize, usize),
}

impl LambdaPath {
    pub fn new(a: usize, center: usize, b: usize) -> Self {
        LambdaPath {
            center,
            ends: (a.min(b), a.max(b)),
        }
    }

    pub fn vertices(&self) -> [usize; 3] {
        [self.ends.0, self.center, self.ends.1]
    }

    pub fn edges(&self) -> [Edge; 2] {
        [Edge::new(self.ends.0, self.center), Edge::new(self.center, self.ends.1)]
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.vertices().contains(&v)
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.edges().contains(&e)
    }
}

impl fmt::Display for LambdaPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}-{}", self.ends.0, self.center, self.ends.1)
    }
}

impl Serialize for LambdaPath {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.vertices().serialize(s)
    }
}

impl<'de> Deserialize<'de> for LambdaPath {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [a, c, b] = <[usize; 3]>::deserialize(d)?;
        Ok(LambdaPath::new(a, c, b))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum Mode {
    /// Does a packing cover every non-deleted vertex?
    Factor,
    /// Maximum number of paths.
    MaxPacking,
}

/// Search limits. Exhausting either yields an indeterminate verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Budget {
    pub max_nodes: u64,
    #[serde(with = "secs")]
    pub max_time: Duration,
}

mod secs {
    use std::time::Duration;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(d.as_secs_f64())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        Ok(Duration::from_secs_f64(f64::deserialize(d)?))
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_nodes: 100_000_000,
            max_time: Duration::from_secs(600),
        }
    }
}

impl Budget {
    pub fn nodes(max_nodes: u64) -> Self {
        Budget {
            max_nodes,
            ..Budget::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackingProblem {
    pub graph: Graph,
    pub mode: Mode,
    pub deleted_vertices: BTreeSet<usize>,
    pub deleted_edges: BTreeSet<Edge>,
    /// Each must lie on some path of the packing.
    pub forced_edges: BTreeSet<Edge>,
    pub forbidden_edges: BTreeSet<Edge>,
    /// Optional vertex sets whose edge cuts guide branching and pruning,
    /// typically the operand blocks of a composite graph.
    pub seams: Vec<Vec<usize>>,
    pub budget: Budget,
}

impl PackingProblem {
    pub fn new(graph: Graph, mode: Mode) -> Self {
        PackingProblem {
            graph,
            mode,
            deleted_vertices: BTreeSet::new(),
            deleted_edges: BTreeSet::new(),
            forced_edges: BTreeSet::new(),
            forbidden_edges: BTreeSet::new(),
            seams: Vec::new(),
            budget: Budget::default(),
        }
    }

    pub fn factor(graph: Graph) -> Self {
        Self::new(graph, Mode::Factor)
    }

    pub fn max_packing(graph: Graph) -> Self {
        Self::new(graph, Mode::MaxPacking)
    }

    pub fn delete_vertex(mut self, v: usize) -> Self {
        self.deleted_vertices.insert(v);
        self
    }

    pub fn delete_edge(mut self, e: Edge) -> Self {
        self.deleted_edges.insert(e);
        self
    }

    pub fn force_edge(mut self, e: Edge) -> Self {
        self.forced_edges.insert(e);
        self
    }

    pub fn forbid_edge(mut self, e: Edge) -> Self {
        self.forbidden_edges.insert(e);
        self
    }

    pub fn with_seams(mut self, seams: Vec<Vec<usize>>) -> Self {
        self.seams = seams;
        self
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    /// Number of non-deleted vertices.
    pub fn active_vertices(&self) -> usize {
        self.graph.n() - self.deleted_vertices.len()
    }

    /// Checks the problem invariants.
    pub fn validate(&self) -> Result<()> {
        let g = &self.graph;
        if let Some(v) = self.deleted_vertices.iter().find(|&&v| v >= g.n()) {
            return Err(Error::input(format!("deleted vertex {v} out of range")));
        }
        for (what, set) in [
            ("deleted", &self.deleted_edges),
            ("forced", &self.forced_edges),
            ("forbidden", &self.forbidden_edges),
        ] {
            if let Some(e) = set.iter().find(|e| !g.has_edge(e.0, e.1)) {
                return Err(Error::input(format!("{what} edge {e} is not an edge of the graph")));
            }
        }
        if let Some(e) = self.forced_edges.intersection(&self.forbidden_edges).next() {
            return Err(Error::precondition(format!("edge {e} is both forced and forbidden")));
        }
        if let Some(v) = self.seams.iter().flatten().find(|&&v| v >= g.n()) {
            return Err(Error::input(format!("seam vertex {v} out of range")));
        }
        if self.mode == Mode::Factor && !self.active_vertices().is_multiple_of(3) {
            return Err(Error::precondition(format!(
                "a factor needs the vertex count divisible by 3, got {}",
                self.active_vertices()
            )));
        }
        Ok(())
    }

    /// Whether an edge may appear on a path of a solution.
    pub fn edge_usable(&self, e: Edge) -> bool {
        !self.deleted_edges.contains(&e)
            && !self.forbidden_edges.contains(&e)
            && !self.deleted_vertices.contains(&e.0)
            && !self.deleted_vertices.contains(&e.1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE", tag = "status")]
pub enum Verdict {
    Sat {
        witness: Vec<LambdaPath>,
    },
    Unsat,
    Optimum {
        value: usize,
        witness: Vec<LambdaPath>,
    },
    /// The budget ran out. For maximum packings the bounds established so far
    /// are reported, with a witness for the lower bound.
    Indeterminate {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        lower_bound: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        upper_bound: Option<usize>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        witness: Vec<LambdaPath>,
    },
}

impl Verdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, Verdict::Sat { .. })
    }

    pub fn is_unsat(&self) -> bool {
        matches!(self, Verdict::Unsat)
    }

    pub fn is_indeterminate(&self) -> bool {
        matches!(self, Verdict::Indeterminate { .. })
    }

    pub fn witness(&self) -> Option<&[LambdaPath]> {
        match self {
            Verdict::Sat { witness } | Verdict::Optimum { witness, .. } => Some(witness),
            Verdict::Indeterminate { witness, .. } if !witness.is_empty() => Some(witness),
            _ => None,
        }
    }

    pub fn optimum(&self) -> Option<usize> {
        match self {
            Verdict::Optimum { value, .. } => Some(*value),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SolveStats {
    pub nodes: u64,
    pub memo_hits: u64,
    pub component_splits: u64,
    /// Branches cut because a residual component's size forces more
    /// uncovered vertices than allowed.
    pub parity_prunes: u64,
    /// Branches cut by the seam residue rule.
    pub seam_prunes: u64,
    /// Wall-clock time; left out of JSON so outputs stay reproducible.
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackingResult {
    pub verdict: Verdict,
    pub stats: SolveStats,
}

/// JSON form of a problem: the graph plus constraint lists.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ProblemJson {
    pub graph: GraphJson,
    pub mode: Mode,
    #[serde(default)]
    pub deleted_vertices: Vec<usize>,
    #[serde(default)]
    pub deleted_edges: Vec<[usize; 2]>,
    #[serde(default)]
    pub forced_edges: Vec<[usize; 2]>,
    #[serde(default)]
    pub forbidden_edges: Vec<[usize; 2]>,
    #[serde(default)]
    pub seams: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<Budget>,
}

impl From<&PackingProblem> for ProblemJson {
    fn from(p: &PackingProblem) -> Self {
        let edges = |s: &BTreeSet<Edge>| s.iter().map(|e| [e.0, e.1]).collect();
        ProblemJson {
            graph: GraphJson::from(&p.graph),
            mode: p.mode,
            deleted_vertices: p.deleted_vertices.iter().copied().collect(),
            deleted_edges: edges(&p.deleted_edges),
            forced_edges: edges(&p.forced_edges),
            forbidden_edges: edges(&p.forbidden_edges),
            seams: p.seams.clone(),
            budget: Some(p.budget),
        }
    }
}

impl TryFrom<ProblemJson> for PackingProblem {
    type Error = Error;

    fn try_from(j: ProblemJson) -> Result<Self> {
        let edges = |v: Vec<[usize; 2]>| v.into_iter().map(|[a, b]| Edge::new(a, b)).collect();
        let p = PackingProblem {
            graph: Graph::try_from(j.graph)?,
            mode: j.mode,
            deleted_vertices: j.deleted_vertices.into_iter().collect(),
            deleted_edges: edges(j.deleted_edges),
            forced_edges: edges(j.forced_edges),
            forbidden_edges: edges(j.forbidden_edges),
            seams: j.seams,
            budget: j.budget.unwrap_or_default(),
        };
        p.validate()?;
        Ok(p)
    }
}
