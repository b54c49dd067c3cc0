//! Named base graphs.
//!
//! | name       | graph                | labels                          |
//! |------------|----------------------|---------------------------------|
//! | `K4`       | complete graph K4    | `0`..`3`                        |
//! | `K33`      | K3,3                 | `x1 x2 x3` / `y1 y2 y3`         |
//! | `Q`        | cube                 | bit strings `000`..`111`        |
//! | `S`        | six-prism C6 x K2    | outer `o0`..`o5`, inner `i0`..`i5` |
//! | `Prism<m>` | prism Cm x K2, m >= 3 | as for `S`                     |
//!
//! Vertex ids follow the order of the labels above. Edges are named `e0`,
//! `e1`, ... in ascending edge order.

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const ATLAS_NAMES: [&str; 4] = ["K4", "K33", "Q", "S"];

pub fn atlas(name: &str) -> Result<Graph> {
    let (labels, edges): (Vec<String>, Vec<(usize, usize)>) = match name {
        "K4" => (
            (0..4).map(|i| i.to_string()).collect(),
            vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
        ),
        "K33" => (
            ["x1", "x2", "x3", "y1", "y2", "y3"].map(String::from).to_vec(),
            (0..3).flat_map(|a| (3..6).map(move |b| (a, b))).collect(),
        ),
        "Q" => {
            let labels = (0..8).map(|i| format!("{i:03b}")).collect();
            let mut edges = Vec::new();
            for v in 0..8usize {
                for bit in 0..3 {
                    let w = v ^ (1 << bit);
                    if v < w {
                        edges.push((v, w));
                    }
                }
            }
            (labels, edges)
        }
        "S" => return prism(6),
        _ => {
            if let Some(m) = name.strip_prefix("Prism").and_then(|m| m.parse::<usize>().ok()) {
                return prism(m);
            }
            return Err(Error::input(format!(
                "unknown atlas graph {name:?} (known: {}, Prism<m>)",
                ATLAS_NAMES.join(", ")
            )));
        }
    };
    let g = Graph::new(labels.len(), edges, labels)?;
    name_edges(g)
}

/// The prism over an `m`-cycle: outer cycle `o*`, inner cycle `i*`, spokes
/// `o_k i_k`.
pub fn prism(m: usize) -> Result<Graph> {
    if m < 3 {
        return Err(Error::input(format!("prism needs a cycle of length >= 3, got {m}")));
    }
    let labels = (0..m)
        .map(|k| format!("o{k}"))
        .chain((0..m).map(|k| format!("i{k}")))
        .collect();
    let mut edges = Vec::new();
    for k in 0..m {
        edges.push((k, (k + 1) % m));
        edges.push((m + k, m + (k + 1) % m));
        edges.push((k, m + k));
    }
    name_edges(Graph::new(2 * m, edges, labels)?)
}

fn name_edges(g: Graph) -> Result<Graph> {
    let names: Vec<_> = g
        .edges()
        .iter()
        .enumerate()
        .map(|(i, e)| (*e, format!("e{i}")))
        .collect();
    g.with_edge_labels(names)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        let count = |n: &str| {
            let g = atlas(n).unwrap();
            (g.n(), g.edge_count())
        };
        assert_eq!(count("K4"), (4, 6));
        assert_eq!(count("K33"), (6, 9));
        assert_eq!(count("Q"), (8, 12));
        assert_eq!(count("S"), (12, 18));
        assert_eq!(count("Prism12"), (24, 36));
        assert!(atlas("K5").is_err());
        assert!(prism(2).is_err());
    }

    #[test]
    fn all_cubic_and_labelled() {
        for name in ATLAS_NAMES {
            let g = atlas(name).unwrap();
            assert!(g.is_cubic(), "{name}");
            assert_eq!(g.edge_by_label("e0"), Some(g.edges()[0]));
        }
        let q = atlas("Q").unwrap();
        assert_eq!(q.vertex_by_label("101"), Some(5));
    }
}
