//! Vertex connectivity up to 3 by exhaustive separator search.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ConnectivityReport {
    pub k: usize,
    pub holds: bool,
    /// On failure, a vertex set of size `< k` whose removal disconnects the
    /// graph. `None` on failure means the graph has at most `k` vertices.
    pub separator: Option<Vec<usize>>,
}

/// Decides whether `g` is `k`-connected for `k` in `1..=3`: more than `k`
/// vertices and no separating set of fewer than `k` vertices.
pub fn connectivity_at_least(g: &Graph, k: usize) -> Result<ConnectivityReport> {
    if !(1..=3).contains(&k) {
        return Err(Error::precondition(format!(
            "connectivity only supported for k in 1..=3, got {k}"
        )));
    }
    if k == 3 && g.n() < 4 {
        return Err(Error::precondition("3-connectivity needs at least 4 vertices"));
    }
    let fail = |separator| ConnectivityReport {
        k,
        holds: false,
        separator,
    };
    if g.n() <= k {
        return Ok(fail(None));
    }
    let n = g.n();
    let mut removed = vec![false; n];
    let disconnected = |removed: &[bool]| g.components_avoiding(removed).len() > 1;

    if disconnected(&removed) {
        return Ok(fail(Some(vec![])));
    }
    if k >= 2 {
        for a in 0..n {
            removed[a] = true;
            if disconnected(&removed) {
                return Ok(fail(Some(vec![a])));
            }
            removed[a] = false;
        }
    }
    if k >= 3 {
        for a in 0..n {
            removed[a] = true;
            for b in a + 1..n {
                removed[b] = true;
                if disconnected(&removed) {
                    return Ok(fail(Some(vec![a, b])));
                }
                removed[b] = false;
            }
            removed[a] = false;
        }
    }
    Ok(ConnectivityReport {
        k,
        holds: true,
        separator: None,
    })
}
