//! The six composition rules.
//!
//! | rule | operator | residues mod 6 | premises | conclusion |
//! |------|----------|----------------|----------|------------|
//! | R1 | `ebridge(A@a, B@b)` | 2, 2 | none | `NoFactorContaining(G, z)` |
//! | R2 | `ymerge(A@a[a1..])` | 0 | `NoFactorContaining(A, a a1)` | `NoFactor(G)` |
//! | R3 | `vsub(A@a, B@b)` | 0, 0 | `NoFactorContaining(A, a a1)` | `NoFactorMinusVertexAvoiding(G, b2, a3 b3)` |
//! | R4 | `esub(A@a, B@b)` | 0, 4 | `NoFactorContaining(A, a)`, `NoFactorMinusVertexAvoiding(B, x, b)` | `NoFactorMinusVertex(G, x)` |
//! | R5 | `esub(A@a, B@b)` | 2, 4 | `NoFactorMinusVertex(B, b1)` | `NoFactorAvoiding(G, a2 b2)` |
//! | R6 | `esub(A@a, B@b)` | 0, 0 | `NoFactorContaining(A, a)`, `NoFactorAvoiding(B, b)` | `NoFactor(G)` |
//!
//! Every operand must be cubic. For R4 the vertex `x` must not be incident
//! to `b`. Edge operands are oriented `tail-head`, so in `esub` `a1 b1` is
//! the new edge `n1` and `a2 b2` is `n2`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::constructions::{ebridge, esub, vsub, ymerge, PortedEdge, PortedVertex};
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};

use super::fact::{graph_hash, Fact, FactKind, Resolved};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Rule {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    #[serde(rename = "BASE")]
    Base,
}

impl Rule {
    pub fn parse(s: &str) -> Option<Rule> {
        Some(match s {
            "R1" => Rule::R1,
            "R2" => Rule::R2,
            "R3" => Rule::R3,
            "R4" => Rule::R4,
            "R5" => Rule::R5,
            "R6" => Rule::R6,
            "BASE" => Rule::Base,
            _ => return None,
        })
    }

    fn operator(self) -> Option<Operator> {
        match self {
            Rule::R1 => Some(Operator::Ebridge),
            Rule::R2 => Some(Operator::Ymerge),
            Rule::R3 => Some(Operator::Vsub),
            Rule::R4 | Rule::R5 | Rule::R6 => Some(Operator::Esub),
            Rule::Base => None,
        }
    }

    /// Required `v mod 6` of the operands.
    fn residues(self) -> &'static [usize] {
        match self {
            Rule::R1 => &[2, 2],
            Rule::R2 => &[0],
            Rule::R3 | Rule::R6 => &[0, 0],
            Rule::R4 => &[0, 4],
            Rule::R5 => &[2, 4],
            Rule::Base => &[],
        }
    }

    /// The rule whose operator and residues match, if any.
    pub fn infer(op: Operator, residues: &[usize]) -> Option<Rule> {
        [Rule::R1, Rule::R2, Rule::R3, Rule::R4, Rule::R5, Rule::R6]
            .into_iter()
            .find(|r| r.operator() == Some(op) && r.residues() == residues)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Base => f.write_str("BASE"),
            r => write!(f, "{r:?}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Operator {
    Ebridge,
    Esub,
    Vsub,
    Ymerge,
}

/// One operand of a construction: the operand graph by hash and the
/// attachment, as vertex labels. Vertex attachments list the vertex and its
/// three ports; edge attachments list tail and head.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperandRef {
    pub graph: String,
    pub at: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Binding {
    pub op: Operator,
    pub operands: Vec<OperandRef>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideCondition {
    pub condition: String,
    pub holds: bool,
}

pub type GraphTable = BTreeMap<String, Graph>;

enum Attach {
    Vertex(PortedVertex),
    Edge(PortedEdge),
}

impl Binding {
    pub fn vertex_operand(g: &Graph, a: &PortedVertex) -> OperandRef {
        let mut at = vec![g.label(a.vertex).to_string()];
        at.extend(a.ports.iter().map(|&p| g.label(p).to_string()));
        OperandRef {
            graph: graph_hash(g),
            at,
        }
    }

    pub fn edge_operand(g: &Graph, a: &PortedEdge) -> OperandRef {
        OperandRef {
            graph: graph_hash(g),
            at: vec![g.label(a.tail).to_string(), g.label(a.head).to_string()],
        }
    }

    fn arity(&self) -> usize {
        match self.op {
            Operator::Ymerge => 1,
            _ => 2,
        }
    }

    fn load<'g>(&self, graphs: &'g GraphTable) -> Result<Vec<(&'g Graph, Attach)>> {
        if self.operands.len() != self.arity() {
            return Err(Error::certificate(format!(
                "{:?} takes {} operand(s), got {}",
                self.op,
                self.arity(),
                self.operands.len()
            )));
        }
        self.operands
            .iter()
            .map(|o| {
                let g = graphs
                    .get(&o.graph)
                    .ok_or_else(|| Error::certificate(format!("unknown operand graph {}", o.graph)))?;
                let find = |l: &String| {
                    g.vertex_by_label(l)
                        .ok_or_else(|| Error::certificate(format!("operand has no vertex `{l}`")))
                };
                let ids = o.at.iter().map(find).collect::<Result<Vec<_>>>()?;
                let attach = match (self.op, ids.as_slice()) {
                    (Operator::Vsub | Operator::Ymerge, &[v, p1, p2, p3]) => {
                        Attach::Vertex(PortedVertex::new(g, v, [p1, p2, p3])?)
                    }
                    (Operator::Esub | Operator::Ebridge, &[t, h]) => Attach::Edge(PortedEdge::new(g, t, h)?),
                    _ => return Err(Error::certificate("attachment has the wrong shape")),
                };
                Ok((g, attach))
            })
            .collect()
    }

    /// Rebuilds the composite graph.
    pub fn build(&self, graphs: &GraphTable) -> Result<Graph> {
        let ops = self.load(graphs)?;
        build_from(self.op, &ops)
    }
}

fn build_from(op: Operator, ops: &[(&Graph, Attach)]) -> Result<Graph> {
    match (op, ops) {
        (Operator::Ymerge, [(g, Attach::Vertex(a))]) => ymerge(g, a),
        (Operator::Vsub, [(ga, Attach::Vertex(a)), (gb, Attach::Vertex(b))]) => vsub(ga, a, gb, b),
        (Operator::Esub, [(ga, Attach::Edge(a)), (gb, Attach::Edge(b))]) => esub(ga, a, gb, b),
        (Operator::Ebridge, [(ga, Attach::Edge(a)), (gb, Attach::Edge(b))]) => Ok(ebridge(ga, a, gb, b)?.0),
        _ => Err(Error::certificate("operator and attachments disagree")),
    }
}

fn fail_on(rule: Rule, side: &[SideCondition]) -> Result<()> {
    match side.iter().find(|c| !c.holds) {
        Some(bad) => Err(Error::certificate(format!(
            "{rule}: side condition fails: {}",
            bad.condition
        ))),
        None => Ok(()),
    }
}

/// Outcome of applying a rule: the composite, its conclusion, the checked
/// side conditions and the premise facts used (by position in `known`).
#[derive(Debug, Clone)]
pub struct Derivation {
    pub graph: Graph,
    pub conclusion: Fact,
    pub side_conditions: Vec<SideCondition>,
    pub premises: Vec<usize>,
}

/// Applies `rule` to the construction in `binding`. Premises are looked up
/// in `known`, first match wins. Fails with a diagnostic if a side condition
/// does not hold or a premise is missing.
pub fn apply_rule(
    rule: Rule,
    binding: &Binding,
    graphs: &GraphTable,
    known: &[Fact],
    subject: Option<&str>,
) -> Result<Derivation> {
    let Some(op) = rule.operator() else {
        return Err(Error::certificate("BASE is not a composition rule"));
    };
    if binding.op != op {
        return Err(Error::certificate(format!(
            "{rule} applies to {op:?}, not {:?}",
            binding.op
        )));
    }
    let ops = binding.load(graphs)?;
    let g = build_from(op, &ops)?;

    let names = ["A", "B"];
    let mut side = Vec::new();
    for (i, ((og, _), want)) in ops.iter().zip(rule.residues()).enumerate() {
        side.push(SideCondition {
            condition: format!("{} is cubic", names[i]),
            holds: og.is_cubic(),
        });
        side.push(SideCondition {
            condition: format!("v({}) = {} ≡ {want} mod 6", names[i], og.n()),
            holds: og.n() % 6 == *want,
        });
    }
    fail_on(rule, &side)?;

    // premise patterns: (operand index, kind, fixed params or None for "any")
    let a_vertex_edge = |at: &Attach| match at {
        Attach::Vertex(a) => Edge::new(a.vertex, a.ports[0]),
        Attach::Edge(a) => a.edge(),
    };
    let mut premises = Vec::new();
    let mut need = |idx: usize, kind: FactKind, params: Option<&[Resolved]>| -> Result<Fact> {
        let (og, _) = &ops[idx];
        let hash = graph_hash(og);
        let want = params.map(|p| Fact::new(kind, og, None, p)).transpose()?;
        let hit = known
            .iter()
            .position(|f| f.kind == kind && f.graph == hash && want.as_ref().is_none_or(|w| w.params == f.params));
        match hit {
            Some(i) => {
                premises.push(i);
                Ok(known[i].clone())
            }
            None => {
                let shown = want.map_or_else(|| format!("{kind}({}, ..)", names[idx]), |w| w.to_string());
                Err(Error::certificate(format!("{rule}: missing premise {shown}")))
            }
        }
    };

    let label_in = |prefix: &str, og: &Graph, v: usize| -> Result<usize> {
        let l = format!("{prefix}.{}", og.label(v));
        g.vertex_by_label(&l)
            .ok_or_else(|| Error::certificate(format!("composite lacks vertex `{l}`")))
    };

    let conclusion = match rule {
        Rule::R1 => {
            let z = g
                .edge_by_label("z")
                .ok_or_else(|| Error::certificate("bridge lacks its middle edge"))?;
            Fact::new(FactKind::NoFactorContaining, &g, subject, &[Resolved::Edge(z)])?
        }
        Rule::R2 => {
            need(
                0,
                FactKind::NoFactorContaining,
                Some(&[Resolved::Edge(a_vertex_edge(&ops[0].1))]),
            )?;
            Fact::new(FactKind::NoFactor, &g, subject, &[])?
        }
        Rule::R3 => {
            need(
                0,
                FactKind::NoFactorContaining,
                Some(&[Resolved::Edge(a_vertex_edge(&ops[0].1))]),
            )?;
            let (Attach::Vertex(a), Attach::Vertex(b)) = (&ops[0].1, &ops[1].1) else {
                unreachable!()
            };
            let b2 = label_in("B", ops[1].0, b.ports[1])?;
            let a3 = label_in("A", ops[0].0, a.ports[2])?;
            let b3 = label_in("B", ops[1].0, b.ports[2])?;
            Fact::new(
                FactKind::NoFactorMinusVertexAvoiding,
                &g,
                subject,
                &[Resolved::Vertex(b2), Resolved::Edge(Edge::new(a3, b3))],
            )?
        }
        Rule::R4 => {
            let (Attach::Edge(a), Attach::Edge(b)) = (&ops[0].1, &ops[1].1) else {
                unreachable!()
            };
            need(0, FactKind::NoFactorContaining, Some(&[Resolved::Edge(a.edge())]))?;
            let bg = ops[1].0;
            let hash = graph_hash(bg);
            let want_edge = Fact::new(FactKind::NoFactorContaining, bg, None, &[Resolved::Edge(b.edge())])?.params;
            let hit = known.iter().position(|f| {
                f.kind == FactKind::NoFactorMinusVertexAvoiding
                    && f.graph == hash
                    && f.params.get(1) == want_edge.first()
            });
            let Some(i) = hit else {
                return Err(Error::certificate(format!(
                    "R4: missing premise NoFactorMinusVertexAvoiding(B, x, {})",
                    want_edge[0]
                )));
            };
            premises.push(i);
            let Resolved::Vertex(x) = known[i].resolve(bg)?[0] else {
                unreachable!()
            };
            side.push(SideCondition {
                condition: format!("{} is not incident to {}", bg.label(x), want_edge[0]),
                holds: !b.edge().contains(x),
            });
            let gx = label_in("B", bg, x)?;
            Fact::new(FactKind::NoFactorMinusVertex, &g, subject, &[Resolved::Vertex(gx)])?
        }
        Rule::R5 => {
            let (Attach::Edge(a), Attach::Edge(b)) = (&ops[0].1, &ops[1].1) else {
                unreachable!()
            };
            need(1, FactKind::NoFactorMinusVertex, Some(&[Resolved::Vertex(b.tail)]))?;
            let a2 = label_in("A", ops[0].0, a.head)?;
            let b2 = label_in("B", ops[1].0, b.head)?;
            Fact::new(
                FactKind::NoFactorAvoiding,
                &g,
                subject,
                &[Resolved::Edge(Edge::new(a2, b2))],
            )?
        }
        Rule::R6 => {
            let (Attach::Edge(a), Attach::Edge(b)) = (&ops[0].1, &ops[1].1) else {
                unreachable!()
            };
            need(0, FactKind::NoFactorContaining, Some(&[Resolved::Edge(a.edge())]))?;
            need(1, FactKind::NoFactorAvoiding, Some(&[Resolved::Edge(b.edge())]))?;
            Fact::new(FactKind::NoFactor, &g, subject, &[])?
        }
        Rule::Base => unreachable!(),
    };

    fail_on(rule, &side)?;
    Ok(Derivation {
        graph: g,
        conclusion,
        side_conditions: side,
        premises,
    })
}
