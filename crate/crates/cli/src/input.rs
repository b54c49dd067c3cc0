use std::fs;
use std::path::Path;

use lambdapack::constructions::dsl::parse_script;
use lambdapack::{io, Edge, Error, Graph, Result};

/// Loads a graph from a `.json` or `.dot` file, a construction script file,
/// or an inline script or expression. `binding` picks a named binding of a
/// script instead of its output.
pub fn load_graph(source: &str, binding: Option<&str>) -> Result<Graph> {
    let path = Path::new(source);
    if path.is_file() {
        let text = fs::read_to_string(path)?;
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => return io::from_json(&text),
            Some("dot") | Some("gv") => return io::from_dot(&text),
            _ => return from_script(&text, binding),
        }
    }
    from_script(source, binding)
}

fn from_script(text: &str, binding: Option<&str>) -> Result<Graph> {
    let eval = parse_script(text)?.evaluate()?;
    let g = match binding {
        Some(name) => eval.get(name).ok_or_else(|| Error::Resolve {
            path: "script".into(),
            message: format!("no binding named `{name}`"),
        })?,
        None => eval
            .output()
            .ok_or_else(|| Error::Input("script defines no graph".into()))?,
    };
    Ok(g.clone())
}

/// An edge given as an edge label (`z`) or as two vertex names or ids
/// joined by `-`.
pub fn parse_edge(g: &Graph, text: &str) -> Result<Edge> {
    if let Some(e) = g.edge_by_label(text) {
        return Ok(e);
    }
    for (i, _) in text.match_indices('-') {
        let (a, b) = (&text[..i], &text[i + 1..]);
        if let (Some(a), Some(b)) = (g.resolve_vertex(a), g.resolve_vertex(b)) {
            if g.has_edge(a, b) {
                return Ok(Edge::new(a, b));
            }
            return Err(Error::Input(format!("{text} is not an edge")));
        }
    }
    Err(Error::Resolve {
        path: "edge".into(),
        message: format!("cannot resolve edge `{text}`"),
    })
}

pub fn parse_vertex(g: &Graph, text: &str) -> Result<usize> {
    g.resolve_vertex(text).ok_or_else(|| Error::Resolve {
        path: "vertex".into(),
        message: format!("no vertex named `{text}`"),
    })
}
