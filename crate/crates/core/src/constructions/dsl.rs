//! Construction expression language.
//!
//! ```text
//! script    = { line } ;
//! line      = [ statement ] [ "#" comment ] NEWLINE ;
//! statement = "let" IDENT "=" expr [ "by" RULE ]
//!           | ( "base" | "probe" ) fact
//!           | expr ;
//! expr      = "atlas" "(" NAME ")"
//!           | IDENT                                  (* binding or atlas name *)
//!           | "vsub" "(" vop "," vop ")"
//!           | "ymerge" "(" vop ")"
//!           | "ymerge3" "(" vop "," vop "," vop ")"
//!           | "esub" "(" eop "," eop ")"
//!           | "ebridge" "(" eop "," eop ")" ;
//! vop       = expr "@" NAME [ "[" NAME { "," NAME } "]" ] ;
//! eop       = expr "@" ( NAME "-" NAME | NAME ) ;
//! fact      = KIND "(" IDENT { "," ( NAME "-" NAME | NAME ) } ")" ;
//! NAME      = { letter | digit | "_" | "." | "'" } ;
//! ```
//!
//! A vertex operand names a vertex by label and optionally its leading
//! ports; unlisted ports follow in ascending id order. An edge operand is
//! either `tail-head` (by vertex labels) or an edge name, in which case the
//! orientation is ascending id order.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::Graph;

use super::{atlas, ebridge, esub, vsub, ymerge3, PortedEdge, PortedVertex};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexRef {
    pub name: String,
    pub ports: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EdgeRef {
    Named(String),
    Ends(String, String),
}

impl fmt::Display for VertexRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        if !self.ports.is_empty() {
            write!(f, "[{}]", self.ports.join(","))?;
        }
        Ok(())
    }
}

impl fmt::Display for EdgeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeRef::Named(n) => write!(f, "{n}"),
            EdgeRef::Ends(a, b) => write!(f, "{a}-{b}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Operand<R> {
    pub expr: Box<Expr>,
    pub at: R,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Atlas(String),
    /// Reference to an earlier `let` binding.
    Var(String),
    Vsub(Operand<VertexRef>, Operand<VertexRef>),
    Ymerge(Operand<VertexRef>),
    Ymerge3(Box<[Operand<VertexRef>; 3]>),
    Esub(Operand<EdgeRef>, Operand<EdgeRef>),
    Ebridge(Operand<EdgeRef>, Operand<EdgeRef>),
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Atlas(n) => write!(f, "atlas({n})"),
            Expr::Var(n) => write!(f, "{n}"),
            Expr::Vsub(a, b) => write!(f, "vsub({}@{}, {}@{})", a.expr, a.at, b.expr, b.at),
            Expr::Ymerge(a) => write!(f, "ymerge({}@{})", a.expr, a.at),
            Expr::Ymerge3(ops) => write!(
                f,
                "ymerge3({}@{}, {}@{}, {}@{})",
                ops[0].expr, ops[0].at, ops[1].expr, ops[1].at, ops[2].expr, ops[2].at
            ),
            Expr::Esub(a, b) => write!(f, "esub({}@{}, {}@{})", a.expr, a.at, b.expr, b.at),
            Expr::Ebridge(a, b) => write!(f, "ebridge({}@{}, {}@{})", a.expr, a.at, b.expr, b.at),
        }
    }
}

/// A claim directive: `KIND(graph, params...)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactSpec {
    pub kind: String,
    pub graph: String,
    pub params: Vec<EdgeRef>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StmtKind {
    Let {
        name: String,
        expr: Expr,
        rule: Option<String>,
    },
    /// Exhaustively verified claim; failure aborts replay.
    Base(FactSpec),
    /// Optional direct check; an exhausted budget is recorded, not fatal.
    Probe(FactSpec),
    Expr(Expr),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stmt {
    pub line: usize,
    pub kind: StmtKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Script {
    pub statements: Vec<Stmt>,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Name(String),
    Punct(char),
    Newline,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '.' || c == '\''
}

/// Newlines end statements only outside brackets, so long expressions may
/// span several lines.
fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    for (li, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let column = i + 1;
            if c == '#' {
                break;
            } else if c.is_whitespace() {
                i += 1;
            } else if is_name_char(c) {
                let start = i;
                while i < chars.len() && is_name_char(chars[i]) {
                    i += 1;
                }
                out.push(Token {
                    tok: Tok::Name(chars[start..i].iter().collect()),
                    line: li + 1,
                    column,
                });
            } else if "()[],@-=;".contains(c) {
                match c {
                    '(' | '[' => depth += 1,
                    ')' | ']' => depth = depth.saturating_sub(1),
                    _ => {}
                }
                let tok = if c == ';' { Tok::Newline } else { Tok::Punct(c) };
                out.push(Token {
                    tok,
                    line: li + 1,
                    column,
                });
                i += 1;
            } else {
                return Err(Error::Parse {
                    line: li + 1,
                    column,
                    message: format!("unexpected character {c:?}"),
                });
            }
        }
        if depth == 0 {
            out.push(Token {
                tok: Tok::Newline,
                line: li + 1,
                column: chars.len() + 1,
            });
        }
    }
    if depth > 0 {
        let line = text.lines().count().max(1);
        let column = text.lines().last().map_or(0, |l| l.chars().count()) + 1;
        out.push(Token {
            tok: Tok::Newline,
            line,
            column,
        });
    }
    Ok(out)
}

const FACT_KINDS: [&str; 5] = [
    "NoFactorContaining",
    "NoFactorAvoiding",
    "NoFactorMinusVertex",
    "NoFactorMinusVertexAvoiding",
    "NoFactor",
];

fn is_atlas_name(name: &str) -> bool {
    atlas(name).is_ok()
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    bound: Vec<String>,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn err_at(&self, tok: Option<&Token>, message: impl Into<String>) -> Error {
        let (line, column) = tok.map(|t| (t.line, t.column)).unwrap_or(self.end);
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    fn err(&self, message: impl Into<String>) -> Error {
        self.err_at(self.peek(), message)
    }

    fn punct(&mut self, c: char) -> Result<()> {
        match self.peek() {
            Some(Token { tok: Tok::Punct(p), .. }) if *p == c => {
                self.pos += 1;
                Ok(())
            }
            Some(Token { tok: Tok::Newline, .. }) | None => Err(self.err(format!("expected `{c}`, found end of line"))),
            _ => Err(self.err(format!("expected `{c}`"))),
        }
    }

    fn at_punct(&self, c: char) -> bool {
        matches!(self.peek(), Some(Token { tok: Tok::Punct(p), .. }) if *p == c)
    }

    fn name(&mut self, what: &str) -> Result<String> {
        match self.peek() {
            Some(Token { tok: Tok::Name(n), .. }) => {
                let n = n.clone();
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.err(format!("expected {what}"))),
        }
    }

    fn script(&mut self) -> Result<Script> {
        let mut statements = Vec::new();
        while let Some(t) = self.peek() {
            if t.tok == Tok::Newline {
                self.pos += 1;
                continue;
            }
            let line = t.line;
            let kind = self.statement()?;
            match self.peek() {
                Some(Token { tok: Tok::Newline, .. }) | None => {}
                _ => return Err(self.err("expected end of statement")),
            }
            statements.push(Stmt { line, kind });
        }
        Ok(Script { statements })
    }

    fn statement(&mut self) -> Result<StmtKind> {
        let first = self.peek().cloned();
        match first.as_ref().map(|t| &t.tok) {
            Some(Tok::Name(k)) if k == "let" => {
                self.pos += 1;
                let name_tok = self.peek().cloned();
                let name = self.name("binding name")?;
                if is_atlas_name(&name) || FACT_KINDS.contains(&name.as_str()) {
                    return Err(self.err_at(name_tok.as_ref(), format!("`{name}` is reserved")));
                }
                self.punct('=')?;
                let expr = self.expr()?;
                let mut rule = None;
                if matches!(self.peek(), Some(Token { tok: Tok::Name(b), .. }) if b == "by") {
                    self.pos += 1;
                    let rtok = self.peek().cloned();
                    let r = self.name("rule name")?;
                    if !matches!(r.as_str(), "R1" | "R2" | "R3" | "R4" | "R5" | "R6") {
                        return Err(self.err_at(rtok.as_ref(), format!("unknown rule `{r}`")));
                    }
                    rule = Some(r);
                }
                self.bound.push(name.clone());
                Ok(StmtKind::Let { name, expr, rule })
            }
            Some(Tok::Name(k)) if k == "base" || k == "probe" => {
                let probe = k == "probe";
                self.pos += 1;
                let fact = self.fact()?;
                Ok(if probe {
                    StmtKind::Probe(fact)
                } else {
                    StmtKind::Base(fact)
                })
            }
            _ => Ok(StmtKind::Expr(self.expr()?)),
        }
    }

    fn fact(&mut self) -> Result<FactSpec> {
        let ktok = self.peek().cloned();
        let kind = self.name("fact kind")?;
        if !FACT_KINDS.contains(&kind.as_str()) {
            return Err(self.err_at(ktok.as_ref(), format!("unknown fact kind `{kind}`")));
        }
        self.punct('(')?;
        let gtok = self.peek().cloned();
        let graph = self.name("graph name")?;
        if !self.bound.contains(&graph) {
            return Err(self.err_at(gtok.as_ref(), format!("unknown binding `{graph}`")));
        }
        let mut params = Vec::new();
        while self.at_punct(',') {
            self.pos += 1;
            params.push(self.edge_ref()?);
        }
        self.punct(')')?;
        Ok(FactSpec { kind, graph, params })
    }

    fn expr(&mut self) -> Result<Expr> {
        let tok = self.peek().cloned();
        let name = self.name("expression")?;
        match name.as_str() {
            "atlas" => {
                self.punct('(')?;
                let ntok = self.peek().cloned();
                let n = self.name("atlas name")?;
                if !is_atlas_name(&n) {
                    return Err(self.err_at(ntok.as_ref(), format!("unknown atlas graph `{n}`")));
                }
                self.punct(')')?;
                Ok(Expr::Atlas(n))
            }
            "vsub" => {
                self.punct('(')?;
                let a = self.vertex_operand()?;
                self.punct(',')?;
                let b = self.vertex_operand()?;
                self.punct(')')?;
                Ok(Expr::Vsub(a, b))
            }
            "ymerge" => {
                self.punct('(')?;
                let a = self.vertex_operand()?;
                self.punct(')')?;
                Ok(Expr::Ymerge(a))
            }
            "ymerge3" => {
                self.punct('(')?;
                let a = self.vertex_operand()?;
                self.punct(',')?;
                let b = self.vertex_operand()?;
                self.punct(',')?;
                let c = self.vertex_operand()?;
                self.punct(')')?;
                Ok(Expr::Ymerge3(Box::new([a, b, c])))
            }
            "esub" | "ebridge" => {
                self.punct('(')?;
                let a = self.edge_operand()?;
                self.punct(',')?;
                let b = self.edge_operand()?;
                self.punct(')')?;
                Ok(if name == "esub" {
                    Expr::Esub(a, b)
                } else {
                    Expr::Ebridge(a, b)
                })
            }
            _ if self.bound.contains(&name) => Ok(Expr::Var(name)),
            _ if is_atlas_name(&name) => Ok(Expr::Atlas(name)),
            _ => Err(self.err_at(tok.as_ref(), format!("unknown name `{name}`"))),
        }
    }

    fn vertex_operand(&mut self) -> Result<Operand<VertexRef>> {
        let expr = Box::new(self.expr()?);
        self.punct('@')?;
        let name = self.name("vertex name")?;
        let mut ports = Vec::new();
        if self.at_punct('[') {
            self.pos += 1;
            ports.push(self.name("port name")?);
            while self.at_punct(',') {
                self.pos += 1;
                ports.push(self.name("port name")?);
            }
            self.punct(']')?;
        }
        Ok(Operand {
            expr,
            at: VertexRef { name, ports },
        })
    }

    fn edge_ref(&mut self) -> Result<EdgeRef> {
        let a = self.name("vertex or edge name")?;
        if self.at_punct('-') {
            self.pos += 1;
            let b = self.name("vertex name")?;
            Ok(EdgeRef::Ends(a, b))
        } else {
            Ok(EdgeRef::Named(a))
        }
    }

    fn edge_operand(&mut self) -> Result<Operand<EdgeRef>> {
        let expr = Box::new(self.expr()?);
        self.punct('@')?;
        let at = self.edge_ref()?;
        Ok(Operand { expr, at })
    }
}

/// Parses a script. Syntax errors and unknown names are reported with
/// line and column; vertex and edge references are checked by evaluation.
pub fn parse_script(text: &str) -> Result<Script> {
    let toks = lex(text)?;
    let end = toks.last().map(|t| (t.line, t.column)).unwrap_or((1, 1));
    let mut p = Parser {
        toks,
        pos: 0,
        bound: Vec::new(),
        end,
    };
    p.script()
}

/// Parses a single expression, e.g. `ebridge(Q@e0, Q@e0)`.
pub fn parse(text: &str) -> Result<Expr> {
    let script = parse_script(text)?;
    match script.statements.as_slice() {
        [Stmt {
            kind: StmtKind::Expr(e),
            ..
        }] => Ok(e.clone()),
        _ => Err(Error::Parse {
            line: 1,
            column: 1,
            message: "expected a single expression".into(),
        }),
    }
}

pub type Env = BTreeMap<String, Graph>;

fn resolve_err(path: &str, message: impl Into<String>) -> Error {
    Error::Resolve {
        path: path.to_string(),
        message: message.into(),
    }
}

pub(crate) fn resolve_vertex(g: &Graph, name: &str, path: &str) -> Result<usize> {
    g.resolve_vertex(name)
        .ok_or_else(|| resolve_err(path, format!("no vertex named `{name}`")))
}

pub(crate) fn resolve_ported_vertex(g: &Graph, r: &VertexRef, path: &str) -> Result<PortedVertex> {
    let v = resolve_vertex(g, &r.name, path)?;
    let leading = r
        .ports
        .iter()
        .map(|p| resolve_vertex(g, p, path))
        .collect::<Result<Vec<_>>>()?;
    PortedVertex::with_leading(g, v, &leading).map_err(|e| resolve_err(path, e.to_string()))
}

pub(crate) fn resolve_ported_edge(g: &Graph, r: &EdgeRef, path: &str) -> Result<PortedEdge> {
    let (tail, head) = match r {
        EdgeRef::Named(n) => {
            let e = g
                .edge_by_label(n)
                .ok_or_else(|| resolve_err(path, format!("no edge named `{n}`")))?;
            (e.0, e.1)
        }
        EdgeRef::Ends(a, b) => (resolve_vertex(g, a, path)?, resolve_vertex(g, b, path)?),
    };
    PortedEdge::new(g, tail, head).map_err(|e| resolve_err(path, e.to_string()))
}

/// Evaluates an expression; `path` is the location used in diagnostics.
pub fn eval(expr: &Expr, env: &Env, path: &str) -> Result<Graph> {
    let sub = |e: &Expr, tag: &str| eval(e, env, &format!("{path}/{tag}"));
    match expr {
        Expr::Atlas(n) => atlas(n).map_err(|e| resolve_err(path, e.to_string())),
        Expr::Var(n) => env
            .get(n)
            .cloned()
            .ok_or_else(|| resolve_err(path, format!("unbound name `{n}`"))),
        Expr::Vsub(a, b) => {
            let (ga, gb) = (sub(&a.expr, "vsub.0")?, sub(&b.expr, "vsub.1")?);
            let pa = resolve_ported_vertex(&ga, &a.at, &format!("{path}/vsub.0@{}", a.at))?;
            let pb = resolve_ported_vertex(&gb, &b.at, &format!("{path}/vsub.1@{}", b.at))?;
            vsub(&ga, &pa, &gb, &pb)
        }
        Expr::Ymerge(a) => {
            let ga = sub(&a.expr, "ymerge.0")?;
            let pa = resolve_ported_vertex(&ga, &a.at, &format!("{path}/ymerge.0@{}", a.at))?;
            ymerge3([(&ga, &pa), (&ga, &pa), (&ga, &pa)])
        }
        Expr::Ymerge3(ops) => {
            let mut graphs = Vec::new();
            let mut ports = Vec::new();
            for (i, op) in ops.iter().enumerate() {
                let g = sub(&op.expr, &format!("ymerge3.{i}"))?;
                ports.push(resolve_ported_vertex(
                    &g,
                    &op.at,
                    &format!("{path}/ymerge3.{i}@{}", op.at),
                )?);
                graphs.push(g);
            }
            ymerge3([
                (&graphs[0], &ports[0]),
                (&graphs[1], &ports[1]),
                (&graphs[2], &ports[2]),
            ])
        }
        Expr::Esub(a, b) | Expr::Ebridge(a, b) => {
            let op = if matches!(expr, Expr::Esub(..)) {
                "esub"
            } else {
                "ebridge"
            };
            let (ga, gb) = (sub(&a.expr, &format!("{op}.0"))?, sub(&b.expr, &format!("{op}.1"))?);
            let pa = resolve_ported_edge(&ga, &a.at, &format!("{path}/{op}.0@{}", a.at))?;
            let pb = resolve_ported_edge(&gb, &b.at, &format!("{path}/{op}.1@{}", b.at))?;
            if op == "esub" {
                esub(&ga, &pa, &gb, &pb)
            } else {
                ebridge(&ga, &pa, &gb, &pb).map(|(g, _)| g)
            }
        }
    }
}

/// Evaluates a stand-alone expression.
pub fn build(expr: &Expr) -> Result<Graph> {
    eval(expr, &Env::new(), "expr")
}

/// The graphs bound by a script, in binding order, and the value of its last
/// bare expression if any.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub bindings: Vec<(String, Graph)>,
    pub result: Option<Graph>,
}

impl Evaluation {
    pub fn get(&self, name: &str) -> Option<&Graph> {
        self.bindings.iter().find(|(n, _)| n == name).map(|(_, g)| g)
    }

    /// The last bare expression, or else the last binding.
    pub fn output(&self) -> Option<&Graph> {
        self.result.as_ref().or_else(|| self.bindings.last().map(|(_, g)| g))
    }
}

impl Script {
    pub fn evaluate(&self) -> Result<Evaluation> {
        let mut env = Env::new();
        let mut bindings = Vec::new();
        let mut result = None;
        for stmt in &self.statements {
            match &stmt.kind {
                StmtKind::Let { name, expr, .. } => {
                    let g = eval(expr, &env, &format!("line {} `{name}`", stmt.line))?;
                    env.insert(name.clone(), g.clone());
                    bindings.push((name.clone(), g));
                }
                StmtKind::Expr(expr) => {
                    result = Some(eval(expr, &env, &format!("line {}", stmt.line))?);
                }
                StmtKind::Base(_) | StmtKind::Probe(_) => {}
            }
        }
        Ok(Evaluation { bindings, result })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atlas_leaf() {
        assert_eq!(parse("atlas(Q)").unwrap(), Expr::Atlas("Q".into()));
        assert_eq!(parse("Q").unwrap(), Expr::Atlas("Q".into()));
        assert_eq!(build(&parse("atlas(Q)").unwrap()).unwrap(), atlas("Q").unwrap());
    }

    #[test]
    fn syntax_error_has_position() {
        match parse("vsub(Q") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (1, 7)),
            other => panic!("{other:?}"),
        }
        match parse("ebridge(Q@e0,\n Q e0)") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 4)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("atlas(K9)"), Err(Error::Parse { .. })));
        assert!(matches!(parse("frob(Q@e0)"), Err(Error::Parse { .. })));
    }

    #[test]
    fn dangling_reference_reports_path() {
        let e = parse("vsub(Q@000, ebridge(Q@e0, Q@nope)@z1)").unwrap();
        match build(&e) {
            Err(Error::Resolve { path, .. }) => assert_eq!(path, "expr/vsub.1/ebridge.1@nope"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn ports_follow_listing_then_ids() {
        let e = parse("vsub(K4@0[3], K4@1)").unwrap();
        let g = build(&e).unwrap();
        // port 1 of A.0 is A.3, port 1 of B.1 is B.0
        let a3 = g.vertex_by_label("A.3").unwrap();
        let b0 = g.vertex_by_label("B.0").unwrap();
        assert_eq!(g.edge_by_label("p1"), Some(crate::graph::Edge::new(a3, b0)));
    }

    #[test]
    fn let_bindings_and_display() {
        let s = parse_script("let K = ebridge(Q@e0, Q@000-001)  # comment\nymerge(K@z1[z2])").unwrap();
        assert_eq!(s.statements.len(), 2);
        let ev = s.evaluate().unwrap();
        assert_eq!(ev.get("K").unwrap().n(), 18);
        assert_eq!(ev.output().unwrap().n(), 54);
        let StmtKind::Let { expr, .. } = &s.statements[0].kind else {
            panic!()
        };
        assert_eq!(expr.to_string(), "ebridge(atlas(Q)@e0, atlas(Q)@000-001)");
        assert!(parse_script("let Q = atlas(K4)").is_err());
        assert!(parse_script("base NoFactor(X)").is_err());
        assert!(parse_script("let K = K4 by R9").is_err());
    }
}
