//! Certificates that composite graphs have no Λ-factor.
//!
//! A certificate is an ordered list of steps. A `BASE` step records an
//! exhaustive search that found no solution; a rule step (R1 to R6, see
//! [`rules`]) rebuilds a composite from its operand graphs and derives a
//! fact about it from facts about the operands. [`replay_pipeline`] runs a
//! construction script and emits the certificate; [`check_certificate`]
//! re-validates one offline.

mod fact;
pub mod rules;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::constructions::dsl::{eval, resolve_ported_edge, resolve_ported_vertex, Env, Expr, Script, StmtKind};
use crate::constructions::provenance_blocks;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::io::GraphJson;
use crate::packing::{solve, Budget, SolveStats, Verdict};
use crate::par;

pub use fact::{graph_hash, Fact, FactKind, Param, Resolved};
pub use rules::{apply_rule, Binding, Derivation, GraphTable, OperandRef, Operator, Rule, SideCondition};

pub const CERTIFICATE_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "type")]
pub enum Evidence {
    /// Exhaustive search with no solution.
    Search {
        verdict: String,
        stats: SolveStats,
        budget: Budget,
    },
    /// The construction the rule was applied to.
    Construction { expression: String, binding: Binding },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CertStep {
    pub id: String,
    pub rule: Rule,
    pub premises: Vec<String>,
    pub conclusion: Fact,
    pub side_conditions: Vec<SideCondition>,
    pub evidence: Evidence,
}

/// Result of an optional direct search for a fact.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Probe {
    pub fact: Fact,
    /// `UNSAT`, or `INDETERMINATE` when the budget ran out.
    pub outcome: String,
    pub stats: SolveStats,
    /// Step deriving the same claim, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derived_by: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Certificate {
    pub version: u32,
    /// Every graph referenced by a step, keyed by [`graph_hash`].
    pub graphs: BTreeMap<String, GraphJson>,
    pub steps: Vec<CertStep>,
    #[serde(default)]
    pub probes: Vec<Probe>,
    /// Ids of the steps derived from premises.
    pub final_facts: Vec<String>,
    #[serde(default)]
    pub notes: Vec<String>,
}

impl Certificate {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn step(&self, id: &str) -> Option<&CertStep> {
        self.steps.iter().find(|s| s.id == id)
    }

    /// Conclusions of the final steps.
    pub fn final_conclusions(&self) -> Vec<&Fact> {
        self.final_facts
            .iter()
            .filter_map(|id| self.step(id))
            .map(|s| &s.conclusion)
            .collect()
    }

    fn graph_table(&self) -> Result<GraphTable> {
        let mut table = GraphTable::new();
        for (hash, gj) in &self.graphs {
            let g = Graph::try_from(gj.clone())?;
            if graph_hash(&g) != *hash {
                return Err(Error::certificate(format!(
                    "graph stored under {hash} has a different hash"
                )));
            }
            table.insert(hash.clone(), g);
        }
        Ok(table)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ReplayOptions {
    /// Budget for `base` directives; exhausting it aborts replay.
    pub base_budget: Budget,
    /// Budget for `probe` directives; exhausting it is recorded.
    pub probe_budget: Budget,
}

/// Runs one exhaustive search for `fact` on `g` and wraps an UNSAT outcome
/// as a `BASE` step. A solution refutes the fact; an exhausted budget is an
/// error.
pub fn verify_base(id: &str, fact: &Fact, g: &Graph, budget: Budget) -> Result<CertStep> {
    let problem = fact.problem(g, budget)?.with_seams(provenance_blocks(g));
    let r = solve(&problem)?;
    match r.verdict {
        Verdict::Unsat => Ok(CertStep {
            id: id.to_string(),
            rule: Rule::Base,
            premises: Vec::new(),
            conclusion: fact.clone(),
            side_conditions: vec![SideCondition {
                condition: format!("{} vertices remain, divisible by 3", problem.active_vertices()),
                holds: true,
            }],
            evidence: Evidence::Search {
                verdict: "UNSAT".into(),
                stats: r.stats,
                budget,
            },
        }),
        Verdict::Indeterminate { .. } => Err(Error::Budget(format!(
            "{fact}: no verdict after {} nodes",
            r.stats.nodes
        ))),
        v => Err(Error::Refuted(format!(
            "{fact}: search found a factor of {} paths",
            v.witness().map_or(0, |w| w.len())
        ))),
    }
}

fn locate(e: Error, at: &str) -> Error {
    match e {
        Error::Certificate(m) => Error::certificate(format!("{at}: {m}")),
        e => e,
    }
}

struct Replay {
    cert: Certificate,
    table: GraphTable,
    facts: Vec<Fact>,
    fact_steps: Vec<String>,
}

impl Replay {
    fn register(&mut self, g: &Graph) -> String {
        let h = graph_hash(g);
        if !self.table.contains_key(&h) {
            self.table.insert(h.clone(), g.clone());
            self.cert.graphs.insert(h.clone(), GraphJson::from(g));
        }
        h
    }

    fn push(&mut self, step: CertStep) {
        self.facts.push(step.conclusion.clone());
        self.fact_steps.push(step.id.clone());
        self.cert.steps.push(step);
    }

    fn next_id(&self) -> String {
        format!("s{}", self.cert.steps.len() + 1)
    }
}

/// Operator and attachment data for a composite expression, or `None` for
/// atlas graphs and plain references.
fn binding_of(expr: &Expr, env: &Env, path: &str) -> Result<Option<(Binding, Vec<Graph>)>> {
    let sub = |e: &Expr, i: usize| eval(e, env, &format!("{path}/{i}"));
    Ok(Some(match expr {
        Expr::Atlas(_) | Expr::Var(_) => return Ok(None),
        Expr::Ymerge3(_) => return Ok(None),
        Expr::Ymerge(a) => {
            let g = sub(&a.expr, 0)?;
            let pv = resolve_ported_vertex(&g, &a.at, path)?;
            (
                Binding {
                    op: Operator::Ymerge,
                    operands: vec![Binding::vertex_operand(&g, &pv)],
                },
                vec![g],
            )
        }
        Expr::Vsub(a, b) => {
            let (ga, gb) = (sub(&a.expr, 0)?, sub(&b.expr, 1)?);
            let (pa, pb) = (
                resolve_ported_vertex(&ga, &a.at, path)?,
                resolve_ported_vertex(&gb, &b.at, path)?,
            );
            (
                Binding {
                    op: Operator::Vsub,
                    operands: vec![Binding::vertex_operand(&ga, &pa), Binding::vertex_operand(&gb, &pb)],
                },
                vec![ga, gb],
            )
        }
        Expr::Esub(a, b) | Expr::Ebridge(a, b) => {
            let (ga, gb) = (sub(&a.expr, 0)?, sub(&b.expr, 1)?);
            let (pa, pb) = (
                resolve_ported_edge(&ga, &a.at, path)?,
                resolve_ported_edge(&gb, &b.at, path)?,
            );
            let op = if matches!(expr, Expr::Esub(..)) {
                Operator::Esub
            } else {
                Operator::Ebridge
            };
            (
                Binding {
                    op,
                    operands: vec![Binding::edge_operand(&ga, &pa), Binding::edge_operand(&gb, &pb)],
                },
                vec![ga, gb],
            )
        }
    }))
}

/// Replays a construction script into a certificate.
///
/// `let` statements build graphs; with `by R<k>`, or when the operator and
/// operand residues match exactly one rule, the rule is applied and its
/// premises are looked up among the facts established so far. `base`
/// statements add exhaustively verified facts, `probe` statements run a
/// direct search whose exhausted budget is only noted. `progress` receives
/// one line per statement.
pub fn replay_pipeline(script: &Script, opts: ReplayOptions, progress: &mut dyn FnMut(&str)) -> Result<Certificate> {
    let mut r = Replay {
        cert: Certificate {
            version: CERTIFICATE_VERSION,
            graphs: BTreeMap::new(),
            steps: Vec::new(),
            probes: Vec::new(),
            final_facts: Vec::new(),
            notes: Vec::new(),
        },
        table: GraphTable::new(),
        facts: Vec::new(),
        fact_steps: Vec::new(),
    };
    let mut env = Env::new();
    for stmt in &script.statements {
        let line = stmt.line;
        match &stmt.kind {
            StmtKind::Let { name, expr, rule } => {
                let path = format!("line {line} `{name}`");
                let g = eval(expr, &env, &path)?;
                r.register(&g);
                let binding = binding_of(expr, &env, &path)?;
                let chosen = match (rule.as_deref(), &binding) {
                    (Some(name), _) => Rule::parse(name),
                    (None, Some((b, operands))) => {
                        Rule::infer(b.op, &operands.iter().map(|g| g.n() % 6).collect::<Vec<_>>())
                    }
                    (None, None) => None,
                };
                if let Some(rule) = chosen {
                    let Some((binding, operands)) = binding else {
                        return Err(Error::certificate(format!(
                            "{path}: {rule} needs a composite expression"
                        )));
                    };
                    for og in &operands {
                        r.register(og);
                    }
                    let d = apply_rule(rule, &binding, &r.table, &r.facts, Some(name)).map_err(|e| locate(e, &path))?;
                    let id = r.next_id();
                    if rule == Rule::R2 && !r.cert.notes.iter().any(|n| n.starts_with("R2")) {
                        r.cert.notes.push(
                            "R2 reads its premise on the operand: NoFactorContaining(A, a a1), where a is the \
                             merged vertex and a1 its first port"
                                .into(),
                        );
                    }
                    progress(&format!("{id} {rule}: {}", d.conclusion));
                    let premises = d.premises.iter().map(|&i| r.fact_steps[i].clone()).collect();
                    r.push(CertStep {
                        id,
                        rule,
                        premises,
                        conclusion: d.conclusion,
                        side_conditions: d.side_conditions,
                        evidence: Evidence::Construction {
                            expression: expr.to_string(),
                            binding,
                        },
                    });
                } else {
                    progress(&format!("built {name} ({} vertices)", g.n()));
                }
                env.insert(name.clone(), g);
            }
            StmtKind::Base(spec) => {
                let g = env
                    .get(&spec.graph)
                    .ok_or_else(|| Error::certificate(format!("line {line}: unbound `{}`", spec.graph)))?;
                let fact = Fact::from_spec(spec, g)?;
                let id = r.next_id();
                let step = verify_base(&id, &fact, g, opts.base_budget)?;
                if let Evidence::Search { stats, .. } = &step.evidence {
                    progress(&format!("{id} BASE: {fact} ({} nodes)", stats.nodes));
                }
                r.push(step);
            }
            StmtKind::Probe(spec) => {
                let g = env
                    .get(&spec.graph)
                    .ok_or_else(|| Error::certificate(format!("line {line}: unbound `{}`", spec.graph)))?;
                let fact = Fact::from_spec(spec, g)?;
                let problem = fact.problem(g, opts.probe_budget)?.with_seams(provenance_blocks(g));
                let res = solve(&problem)?;
                let derived_by = r
                    .facts
                    .iter()
                    .position(|f| f.same_claim(&fact))
                    .map(|i| r.fact_steps[i].clone());
                let outcome = match res.verdict {
                    Verdict::Unsat => "UNSAT",
                    Verdict::Indeterminate { .. } => {
                        r.cert.notes.push(format!(
                            "probe {fact} exhausted its budget after {} nodes; the claim rests on {}",
                            res.stats.nodes,
                            derived_by.as_deref().unwrap_or("no step")
                        ));
                        "INDETERMINATE"
                    }
                    _ => return Err(Error::Refuted(format!("probe {fact}: search found a factor"))),
                };
                progress(&format!("probe {fact}: {outcome} ({} nodes)", res.stats.nodes));
                r.cert.probes.push(Probe {
                    fact,
                    outcome: outcome.into(),
                    stats: res.stats,
                    derived_by,
                });
            }
            StmtKind::Expr(_) => {}
        }
    }
    r.cert.final_facts = r
        .cert
        .steps
        .iter()
        .filter(|s| s.rule != Rule::Base && !s.premises.is_empty())
        .map(|s| s.id.clone())
        .collect();
    Ok(r.cert)
}

/// Replays the built-in pipeline with default budgets.
pub fn replay_default() -> Result<Certificate> {
    let script = crate::constructions::pipeline::default_pipeline()?;
    replay_pipeline(&script, ReplayOptions::default(), &mut |_| {})
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    /// Accept `BASE` evidence as recorded.
    Trusting,
    /// Re-run every `BASE` search.
    Strict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckReport {
    pub steps: usize,
    pub base_searches_rerun: usize,
    pub final_facts: Vec<String>,
}

/// Re-validates a certificate: stored graphs match their hashes, every rule
/// step's composite is rebuilt from its operands and matches the subject of
/// the conclusion, side conditions and premise links are re-derived, and
/// `BASE` steps carry UNSAT evidence (re-searched in strict mode).
pub fn check_certificate(cert: &Certificate, mode: CheckMode) -> Result<CheckReport> {
    if cert.version != CERTIFICATE_VERSION {
        return Err(Error::certificate(format!("unsupported version {}", cert.version)));
    }
    let table = cert.graph_table()?;
    let mut seen: Vec<(String, Fact)> = Vec::new();
    let mut rerun = 0;
    for step in &cert.steps {
        if seen.iter().any(|(id, _)| *id == step.id) {
            return Err(Error::certificate(format!("duplicate step id {}", step.id)));
        }
        let subject = table
            .get(&step.conclusion.graph)
            .ok_or_else(|| Error::certificate(format!("{}: subject graph missing", step.id)))?;
        step.conclusion.resolve(subject)?;
        match (&step.rule, &step.evidence) {
            (Rule::Base, Evidence::Search { verdict, budget, .. }) => {
                if !step.premises.is_empty() || verdict != "UNSAT" {
                    return Err(Error::certificate(format!(
                        "{}: BASE step without UNSAT evidence",
                        step.id
                    )));
                }
                let problem = step.conclusion.problem(subject, *budget)?;
                if mode == CheckMode::Strict {
                    rerun += 1;
                    let r = solve(&problem.with_seams(provenance_blocks(subject)))?;
                    match r.verdict {
                        Verdict::Unsat => {}
                        Verdict::Indeterminate { .. } => {
                            return Err(Error::Budget(format!("{}: re-search exhausted its budget", step.id)))
                        }
                        _ => return Err(Error::Refuted(format!("{}: re-search found a factor", step.id))),
                    }
                }
            }
            (rule, Evidence::Construction { binding, .. }) if *rule != Rule::Base => {
                let premises: Vec<Fact> = step
                    .premises
                    .iter()
                    .map(|p| {
                        seen.iter()
                            .find(|(id, _)| id == p)
                            .map(|(_, f)| f.clone())
                            .ok_or_else(|| Error::certificate(format!("{}: dangling premise {p}", step.id)))
                    })
                    .collect::<Result<_>>()?;
                let d = apply_rule(*rule, binding, &table, &premises, step.conclusion.subject.as_deref())
                    .map_err(|e| locate(e, &step.id))?;
                if GraphJson::from(&d.graph) != cert.graphs[&step.conclusion.graph] {
                    return Err(Error::certificate(format!("{}: rebuilt composite differs", step.id)));
                }
                if !d.conclusion.same_claim(&step.conclusion) {
                    return Err(Error::certificate(format!(
                        "{}: rule yields {}, step claims {}",
                        step.id, d.conclusion, step.conclusion
                    )));
                }
                if d.premises.len() != premises.len() {
                    return Err(Error::certificate(format!("{}: unused premises", step.id)));
                }
                if d.side_conditions != step.side_conditions {
                    return Err(Error::certificate(format!("{}: side conditions differ", step.id)));
                }
            }
            _ => return Err(Error::certificate(format!("{}: evidence does not match rule", step.id))),
        }
        seen.push((step.id.clone(), step.conclusion.clone()));
    }
    for id in &cert.final_facts {
        if cert.step(id).is_none() {
            return Err(Error::certificate(format!("final fact {id} has no step")));
        }
    }
    Ok(CheckReport {
        steps: cert.steps.len(),
        base_searches_rerun: rerun,
        final_facts: cert.final_conclusions().iter().map(|f| f.to_string()).collect(),
    })
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CrossCheck {
    pub step: String,
    pub fact: String,
    pub outcome: String,
    pub nodes: u64,
}

/// Searches directly for every rule-derived fact whose subject has at most
/// `max_vertices` vertices. A solution contradicts the derivation and is an
/// error; an exhausted budget is reported as `INDETERMINATE`.
pub fn cross_check(cert: &Certificate, max_vertices: usize, budget: Budget) -> Result<Vec<CrossCheck>> {
    let table = cert.graph_table()?;
    let targets: Vec<&CertStep> = cert
        .steps
        .iter()
        .filter(|s| s.rule != Rule::Base && s.conclusion.vertices <= max_vertices)
        .collect();
    let runs = par::map(&targets, |s| {
        let g = &table[&s.conclusion.graph];
        let p = s.conclusion.problem(g, budget)?.with_seams(provenance_blocks(g));
        solve(&p)
    });
    let mut out = Vec::new();
    for (s, r) in targets.iter().zip(runs) {
        let r = r?;
        let outcome = match r.verdict {
            Verdict::Unsat => "UNSAT",
            Verdict::Indeterminate { .. } => "INDETERMINATE",
            _ => {
                return Err(Error::Refuted(format!(
                    "{} ({}): direct search found a factor",
                    s.conclusion, s.id
                )))
            }
        };
        out.push(CrossCheck {
            step: s.id.clone(),
            fact: s.conclusion.to_string(),
            outcome: outcome.into(),
            nodes: r.stats.nodes,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::dsl::parse_script;

    #[test]
    fn default_pipeline_certifies_and_checks() {
        let cert = replay_default().unwrap();
        let finals: Vec<String> = cert.final_conclusions().iter().map(|f| f.to_string()).collect();
        assert_eq!(finals.len(), 5, "{finals:?}");
        assert!(finals.contains(&"NoFactor(N)".to_string()));
        assert!(finals.contains(&"NoFactor(R)".to_string()));
        let report = check_certificate(&cert, CheckMode::Trusting).unwrap();
        assert_eq!(report.steps, cert.steps.len());
    }

    #[test]
    fn wrong_residue_is_rejected() {
        let script =
            parse_script("let K = ebridge(Q@000-001, Q@000-001) by R1\nlet X = esub(S@o0-o1, K@z1-z2) by R5\n")
                .unwrap();
        let err = replay_pipeline(&script, ReplayOptions::default(), &mut |_| {}).unwrap_err();
        assert!(err.to_string().contains("side condition"), "{err}");
    }

    #[test]
    fn tampering_is_detected() {
        let cert = replay_default().unwrap();
        let mut bad = cert.clone();
        let n = bad
            .steps
            .iter_mut()
            .find(|s| s.conclusion.subject.as_deref() == Some("N"))
            .unwrap();
        n.conclusion.vertices = 71;
        assert!(check_certificate(&bad, CheckMode::Trusting).is_err());
        let mut bad = cert.clone();
        bad.steps[1].premises.push("s99".into());
        assert!(check_certificate(&bad, CheckMode::Trusting).is_err());
    }
}
