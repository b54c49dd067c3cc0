//! Graph JSON and DOT formats.
//!
//! JSON: `{ "n": 4, "edges": [[0,1], ...], "labels": {"0": "K4.0", ...} }`,
//! with an optional `"edgeLabels": {"2-3": "z"}` map for named edges.
//!
//! DOT: an undirected `graph` with one quoted node statement per vertex in id
//! order (so ids survive a round trip) and one `--` statement per edge; named
//! edges carry a `label` attribute.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    pub labels: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub edge_labels: BTreeMap<String, String>,
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> Self {
        GraphJson {
            n: g.n(),
            edges: g.edges().iter().map(|e| [e.0, e.1]).collect(),
            labels: g
                .labels()
                .iter()
                .enumerate()
                .map(|(i, l)| (i.to_string(), l.clone()))
                .collect(),
            edge_labels: g
                .edge_labels()
                .iter()
                .map(|(e, l)| (e.to_string(), l.clone()))
                .collect(),
        }
    }
}

impl TryFrom<GraphJson> for Graph {
    type Error = Error;

    fn try_from(j: GraphJson) -> Result<Graph> {
        let mut labels: Vec<String> = (0..j.n).map(|i| i.to_string()).collect();
        for (k, v) in j.labels {
            let id: usize = k.parse().map_err(|_| Error::input(format!("bad label key {k:?}")))?;
            if id >= j.n {
                return Err(Error::input(format!("label for vertex {id} out of range")));
            }
            labels[id] = v;
        }
        let g = Graph::new(j.n, j.edges.iter().map(|e| (e[0], e[1])), labels)?;
        let mut named = Vec::new();
        for (k, v) in j.edge_labels {
            let (a, b) = k
                .split_once('-')
                .and_then(|(a, b)| Some((a.parse().ok()?, b.parse().ok()?)))
                .ok_or_else(|| Error::input(format!("bad edge key {k:?}")))?;
            named.push((Edge::new(a, b), v));
        }
        g.with_edge_labels(named)
    }
}

pub fn to_json(g: &Graph) -> String {
    serde_json::to_string_pretty(&GraphJson::from(g)).expect("graph json serializes")
}

pub fn from_json(text: &str) -> Result<Graph> {
    let j: GraphJson = serde_json::from_str(text)?;
    Graph::try_from(j)
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn to_dot(g: &Graph) -> String {
    let mut out = String::from("graph G {\n");
    for l in g.labels() {
        let _ = writeln!(out, "  {};", quote(l));
    }
    for e in g.edges() {
        let _ = write!(out, "  {} -- {}", quote(g.label(e.0)), quote(g.label(e.1)));
        if let Some(name) = g.edge_label(*e) {
            let _ = write!(out, " [label={}]", quote(name));
        }
        out.push_str(";\n");
    }
    out.push_str("}\n");
    out
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Id(String),
    Sym(char),
    Dash,
}

fn dot_tokens(text: &str) -> Result<Vec<Tok>> {
    let mut toks = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '"' => {
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some('\\') => s.push(chars.next().ok_or_else(|| Error::input("dangling escape in DOT"))?),
                        Some('"') => break,
                        Some(c) => s.push(c),
                        None => return Err(Error::input("unterminated string in DOT")),
                    }
                }
                toks.push(Tok::Id(s));
            }
            '-' => {
                chars.next();
                if chars.next() != Some('-') {
                    return Err(Error::input("expected `--` in DOT"));
                }
                toks.push(Tok::Dash);
            }
            '{' | '}' | ';' | '[' | ']' | '=' | ',' => {
                chars.next();
                toks.push(Tok::Sym(c));
            }
            _ => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_alphanumeric() || c == '_' || c == '.' {
                        s.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                if s.is_empty() {
                    return Err(Error::input(format!("unexpected character {c:?} in DOT")));
                }
                toks.push(Tok::Id(s));
            }
        }
    }
    Ok(toks)
}

/// Parses the DOT subset written by [`to_dot`]: node and edge statements with
/// optional `label` attributes. Vertices are numbered in order of appearance.
pub fn from_dot(text: &str) -> Result<Graph> {
    let toks = dot_tokens(text)?;
    let mut i = 0;
    if matches!(toks.first(), Some(Tok::Id(s)) if s == "strict") {
        i += 1;
    }
    match toks.get(i) {
        Some(Tok::Id(s)) if s == "graph" => i += 1,
        _ => return Err(Error::input("DOT input must start with `graph`")),
    }
    if let Some(Tok::Id(_)) = toks.get(i) {
        i += 1;
    }
    if toks.get(i) != Some(&Tok::Sym('{')) {
        return Err(Error::input("expected `{` in DOT"));
    }
    i += 1;
    let mut names: Vec<String> = Vec::new();
    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    let mut edges = Vec::new();
    let mut named = Vec::new();
    let mut intern = |s: &str, names: &mut Vec<String>| -> usize {
        *index.entry(s.to_string()).or_insert_with(|| {
            names.push(s.to_string());
            names.len() - 1
        })
    };
    loop {
        match toks.get(i) {
            Some(Tok::Sym('}')) => break,
            Some(Tok::Sym(';')) => i += 1,
            Some(Tok::Id(a)) => {
                let u = intern(a, &mut names);
                i += 1;
                let mut prev = u;
                let mut chain = Vec::new();
                while toks.get(i) == Some(&Tok::Dash) {
                    let Some(Tok::Id(b)) = toks.get(i + 1) else {
                        return Err(Error::input("expected node after `--`"));
                    };
                    let v = intern(b, &mut names);
                    chain.push((prev, v));
                    prev = v;
                    i += 2;
                }
                let mut label = None;
                if toks.get(i) == Some(&Tok::Sym('[')) {
                    i += 1;
                    while toks.get(i) != Some(&Tok::Sym(']')) {
                        let (Some(Tok::Id(k)), Some(Tok::Sym('=')), Some(Tok::Id(v))) =
                            (toks.get(i), toks.get(i + 1), toks.get(i + 2))
                        else {
                            return Err(Error::input("malformed DOT attribute list"));
                        };
                        if k == "label" {
                            label = Some(v.clone());
                        }
                        i += 3;
                        if toks.get(i) == Some(&Tok::Sym(',')) || toks.get(i) == Some(&Tok::Sym(';')) {
                            i += 1;
                        }
                    }
                    i += 1;
                }
                for &(a, b) in &chain {
                    edges.push((a, b));
                    if let Some(l) = &label {
                        named.push((Edge::new(a, b), l.clone()));
                    }
                }
            }
            _ => return Err(Error::input("malformed DOT statement")),
        }
    }
    let n = names.len();
    Graph::new(n, edges, names)?.with_edge_labels(named)
}
