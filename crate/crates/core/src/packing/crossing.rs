use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};

use super::{verify_witness, LambdaPath, PackingProblem};

/// How a Λ-factor meets the three edges of a vertex-substitution seam.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CrossingCase {
    #[serde(rename = "a1.1")]
    A11,
    #[serde(rename = "a1.2")]
    A12,
    #[serde(rename = "a1.3")]
    A13,
    #[serde(rename = "a2.1")]
    A21,
    #[serde(rename = "a2.2")]
    A22,
    #[serde(rename = "a2.3")]
    A23,
    #[serde(rename = "violation")]
    Violation(String),
}

impl CrossingCase {
    pub fn is_violation(&self) -> bool {
        matches!(self, CrossingCase::Violation(_))
    }
}

impl fmt::Display for CrossingCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CrossingCase::A11 => "a1.1",
            CrossingCase::A12 => "a1.2",
            CrossingCase::A13 => "a1.3",
            CrossingCase::A21 => "a2.1",
            CrossingCase::A22 => "a2.2",
            CrossingCase::A23 => "a2.3",
            CrossingCase::Violation(why) => return write!(f, "violation: {why}"),
        };
        f.write_str(s)
    }
}

/// The side whose vertex count the case is read from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReferenceSide {
    A,
    B,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingReport {
    pub case: CrossingCase,
    pub reference: ReferenceSide,
    /// Crossing paths with one vertex on the reference side.
    pub single: usize,
    /// Crossing paths with two vertices on the reference side.
    pub double: usize,
}

/// Classifies how `factor` crosses the 3-edge cut around `side` (the
/// vertices of `A - a` in `A a σ b B`). The reference side is `A - a` unless
/// `v(A) ≡ 2 mod 3`, in which case the roles are swapped.
pub fn crossing_pattern(g: &Graph, side: &[usize], factor: &[LambdaPath]) -> Result<CrossingReport> {
    let mut inside = vec![false; g.n()];
    for &v in side {
        if v >= g.n() {
            return Err(Error::input(format!("vertex {v} out of range")));
        }
        inside[v] = true;
    }
    let cut = g.edge_cut(side)?;
    if cut.size() != 3 {
        return Err(Error::precondition(format!(
            "expected a 3-edge cut, found {}",
            cut.size()
        )));
    }
    verify_witness(&PackingProblem::factor(g.clone()), factor)
        .map_err(|e| Error::input(format!("not a Λ-factor: {e}")))?;

    let reference = if side.len() % 3 == 1 {
        ReferenceSide::B
    } else {
        ReferenceSide::A
    };
    let on_ref = |v: usize| inside[v] == (reference == ReferenceSide::A);
    let ref_size = if reference == ReferenceSide::A {
        side.len()
    } else {
        g.n() - side.len()
    };

    let (mut single, mut double) = (0, 0);
    for p in factor {
        let crossing = p.edges().iter().filter(|e| cut.edges.contains(e)).count();
        match crossing {
            0 => {}
            1 => match p.vertices().iter().filter(|&&v| on_ref(v)).count() {
                1 => single += 1,
                _ => double += 1,
            },
            _ => {
                return Ok(CrossingReport {
                    case: CrossingCase::Violation(format!("path {p} uses two seam edges")),
                    reference,
                    single,
                    double,
                })
            }
        }
    }
    let case = match (ref_size % 3, single, double) {
        (2, 0, 1) => CrossingCase::A11,
        (2, 2, 0) => CrossingCase::A12,
        (2, 1, 2) => CrossingCase::A13,
        (0, 0, 0) => CrossingCase::A21,
        (0, 1, 1) => CrossingCase::A22,
        (0, 3, 0) | (0, 0, 3) => CrossingCase::A23,
        (r, s, d) => CrossingCase::Violation(format!("{s} single and {d} double crossings with side residue {r}")),
    };
    Ok(CrossingReport {
        case,
        reference,
        single,
        double,
    })
}

/// Number of paths of `factor` that use an edge leaving `block`.
pub fn bundle_size(g: &Graph, block: &[usize], factor: &[LambdaPath]) -> Result<usize> {
    let cut: Vec<Edge> = g.edge_cut(block)?.edges;
    Ok(factor
        .iter()
        .filter(|p| p.edges().iter().any(|e| cut.contains(e)))
        .count())
}
