//! Planarity testing with checkable witnesses.
//!
//! Planar graphs come back with a rotation system (a cyclic neighbour order
//! at every vertex) and non-planar graphs with an edge-minimal non-planar
//! subgraph, which is a subdivision of K5 or K3,3. Both witnesses have
//! independent verifiers, so callers never need to trust the verdict alone.
//!
//! Embeddings are computed per biconnected block with the path-addition
//! algorithm of Demoucron, Malgrange and Pertuiset and glued at cut vertices.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use crate::graph::{Edge, Graph};

/// Cyclic order of neighbours around each vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RotationSystem {
    pub rotation: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum KuratowskiKind {
    K5,
    K33,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct KuratowskiSubdivision {
    pub kind: KuratowskiKind,
    pub branch_vertices: Vec<usize>,
    pub edges: Vec<Edge>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase", tag = "type")]
pub enum PlanarityWitness {
    Embedding(RotationSystem),
    Obstruction(KuratowskiSubdivision),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlanarityReport {
    pub planar: bool,
    pub witness: PlanarityWitness,
}

pub fn is_planar(g: &Graph) -> PlanarityReport {
    match embed(g.n(), g.edges()) {
        Some(rotation) => PlanarityReport {
            planar: true,
            witness: PlanarityWitness::Embedding(rotation),
        },
        None => PlanarityReport {
            planar: false,
            witness: PlanarityWitness::Obstruction(find_obstruction(g.n(), g.edges())),
        },
    }
}

/// Checks that `rot` is a rotation system of `g` whose faces satisfy Euler's
/// formula, i.e. that it describes a genus-0 embedding.
pub fn verify_embedding(g: &Graph, rot: &RotationSystem) -> bool {
    let n = g.n();
    if rot.rotation.len() != n {
        return false;
    }
    for v in 0..n {
        let mut sorted = rot.rotation[v].clone();
        sorted.sort_unstable();
        if sorted != g.adj(v) {
            return false;
        }
    }
    // position of each neighbour within the rotation at v
    let pos: Vec<BTreeMap<usize, usize>> = rot
        .rotation
        .iter()
        .map(|r| r.iter().enumerate().map(|(i, &w)| (w, i)).collect())
        .collect();
    let mut used: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut faces = 0usize;
    for e in g.edges() {
        for (a, b) in [(e.0, e.1), (e.1, e.0)] {
            if used.contains(&(a, b)) {
                continue;
            }
            faces += 1;
            let (mut u, mut v) = (a, b);
            while used.insert((u, v)) {
                let r = &rot.rotation[v];
                let next = r[(pos[v][&u] + 1) % r.len()];
                u = v;
                v = next;
            }
            if (u, v) != (a, b) {
                return false;
            }
        }
    }
    let isolated = (0..n).filter(|&v| g.degree(v) == 0).count();
    let comps = g.components().len();
    n + faces + isolated == g.edge_count() + 2 * comps
}

/// Checks that `obs` is a subdivision of K5 or K3,3 contained in `g`.
pub fn verify_obstruction(g: &Graph, obs: &KuratowskiSubdivision) -> bool {
    if obs.edges.iter().any(|e| !g.has_edge(e.0, e.1)) {
        return false;
    }
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut distinct = BTreeSet::new();
    for e in &obs.edges {
        if !distinct.insert(*e) {
            return false;
        }
        adj.entry(e.0).or_default().push(e.1);
        adj.entry(e.1).or_default().push(e.0);
    }
    let branch: BTreeSet<usize> = obs.branch_vertices.iter().copied().collect();
    let want_deg = match obs.kind {
        KuratowskiKind::K5 => 4,
        KuratowskiKind::K33 => 3,
    };
    let want_count = match obs.kind {
        KuratowskiKind::K5 => 5,
        KuratowskiKind::K33 => 6,
    };
    if branch.len() != want_count || obs.branch_vertices.len() != want_count {
        return false;
    }
    for (v, nb) in &adj {
        let expect = if branch.contains(v) { want_deg } else { 2 };
        if nb.len() != expect {
            return false;
        }
    }
    if branch.iter().any(|b| !adj.contains_key(b)) {
        return false;
    }
    // suppress degree-2 vertices: walk every branch-to-branch thread
    let mut reduced = BTreeSet::new();
    let mut walked = 0usize;
    for &b in &branch {
        for &first in &adj[&b] {
            let (mut prev, mut cur) = (b, first);
            let mut steps = 1;
            while !branch.contains(&cur) {
                let nb = &adj[&cur];
                let next = if nb[0] == prev { nb[1] } else { nb[0] };
                prev = cur;
                cur = next;
                steps += 1;
                if steps > obs.edges.len() {
                    return false;
                }
            }
            if cur == b {
                return false;
            }
            walked += steps;
            if b < cur && !reduced.insert((b, cur)) {
                return false;
            }
        }
    }
    // every thread is walked from both ends; stray cycles are never reached
    if walked != 2 * obs.edges.len() {
        return false;
    }
    let bv: Vec<usize> = branch.iter().copied().collect();
    match obs.kind {
        KuratowskiKind::K5 => reduced.len() == 10,
        KuratowskiKind::K33 => {
            if reduced.len() != 9 {
                return false;
            }
            // the reduced graph must be bipartite with parts of size 3
            let side_of = |x: usize| reduced.contains(&(bv[0].min(x), bv[0].max(x)));
            let part: Vec<usize> = bv.iter().copied().filter(|&x| x == bv[0] || !side_of(x)).collect();
            let other: Vec<usize> = bv.iter().copied().filter(|x| !part.contains(x)).collect();
            part.len() == 3
                && other.len() == 3
                && part
                    .iter()
                    .all(|&x| other.iter().all(|&y| reduced.contains(&(x.min(y), x.max(y)))))
        }
    }
}

fn adjacency(n: usize, edges: &[Edge]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for e in edges {
        adj[e.0].push(e.1);
        adj[e.1].push(e.0);
    }
    for row in &mut adj {
        row.sort_unstable();
    }
    adj
}

/// Embeds the graph `(n, edges)` or returns `None` if it is not planar.
fn embed(n: usize, edges: &[Edge]) -> Option<RotationSystem> {
    if n >= 3 && edges.len() > 3 * n - 6 {
        return None;
    }
    let adj = adjacency(n, edges);
    let mut rotation = vec![Vec::new(); n];
    for block in biconnected_blocks(&adj) {
        if block.len() == 1 {
            let e = block[0];
            rotation[e.0].push(e.1);
            rotation[e.1].push(e.0);
            continue;
        }
        let mut verts: Vec<usize> = block.iter().flat_map(|e| [e.0, e.1]).collect();
        verts.sort_unstable();
        verts.dedup();
        let local = |v: usize| verts.binary_search(&v).unwrap();
        let local_edges: Vec<(usize, usize)> = block.iter().map(|e| (local(e.0), local(e.1))).collect();
        let faces = dmp_faces(verts.len(), &local_edges)?;
        for (lv, rot) in faces_to_rotation(verts.len(), &faces).into_iter().enumerate() {
            rotation[verts[lv]].extend(rot.into_iter().map(|w| verts[w]));
        }
    }
    Some(RotationSystem { rotation })
}

/// Edge sets of the biconnected components.
fn biconnected_blocks(adj: &[Vec<usize>]) -> Vec<Vec<Edge>> {
    struct State<'a> {
        adj: &'a [Vec<usize>],
        disc: Vec<usize>,
        low: Vec<usize>,
        time: usize,
        stack: Vec<Edge>,
        blocks: Vec<Vec<Edge>>,
    }
    fn dfs(s: &mut State, v: usize, parent: Option<usize>) {
        s.time += 1;
        s.disc[v] = s.time;
        s.low[v] = s.time;
        for i in 0..s.adj[v].len() {
            let w = s.adj[v][i];
            if s.disc[w] == 0 {
                s.stack.push(Edge::new(v, w));
                dfs(s, w, Some(v));
                s.low[v] = s.low[v].min(s.low[w]);
                if s.low[w] >= s.disc[v] {
                    let target = Edge::new(v, w);
                    let mut block = Vec::new();
                    while let Some(e) = s.stack.pop() {
                        block.push(e);
                        if e == target {
                            break;
                        }
                    }
                    block.sort_unstable();
                    s.blocks.push(block);
                }
            } else if Some(w) != parent && s.disc[w] < s.disc[v] {
                s.stack.push(Edge::new(v, w));
                s.low[v] = s.low[v].min(s.disc[w]);
            }
        }
    }
    let n = adj.len();
    let mut s = State {
        adj,
        disc: vec![0; n],
        low: vec![0; n],
        time: 0,
        stack: Vec::new(),
        blocks: Vec::new(),
    };
    for v in 0..n {
        if s.disc[v] == 0 {
            dfs(&mut s, v, None);
        }
    }
    s.blocks
}

struct Fragment {
    attachments: Vec<usize>,
    /// Non-embedded vertices of the fragment (empty for a chord).
    interior: Vec<usize>,
    chord: Option<(usize, usize)>,
}

/// Faces (as vertex cycles) of a planar embedding of a 2-connected graph,
/// or `None` if the graph is not planar.
fn dmp_faces(n: usize, edges: &[(usize, usize)]) -> Option<Vec<Vec<usize>>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    for row in &mut adj {
        row.sort_unstable();
    }
    let mut in_h = vec![false; n];
    let mut embedded: BTreeSet<(usize, usize)> = BTreeSet::new();
    let key = |a: usize, b: usize| (a.min(b), a.max(b));

    let cycle = find_cycle(&adj)?;
    for i in 0..cycle.len() {
        in_h[cycle[i]] = true;
        embedded.insert(key(cycle[i], cycle[(i + 1) % cycle.len()]));
    }
    let mut rev = cycle.clone();
    rev.reverse();
    let mut faces = vec![cycle, rev];

    while embedded.len() < edges.len() {
        let fragments = fragments(&adj, &in_h, &embedded);
        let face_sets: Vec<BTreeSet<usize>> = faces.iter().map(|f| f.iter().copied().collect()).collect();
        let mut choice: Option<(usize, usize)> = None;
        for (fi, frag) in fragments.iter().enumerate() {
            let admissible: Vec<usize> = (0..faces.len())
                .filter(|&k| frag.attachments.iter().all(|a| face_sets[k].contains(a)))
                .collect();
            match admissible.len() {
                0 => return None,
                1 => {
                    choice = Some((fi, admissible[0]));
                    break;
                }
                _ => {
                    if choice.is_none() {
                        choice = Some((fi, admissible[0]));
                    }
                }
            }
        }
        let (fi, face_idx) = choice?;
        let path = fragment_path(&adj, &in_h, &fragments[fi]);
        for w in path.windows(2) {
            embedded.insert(key(w[0], w[1]));
        }
        for &v in &path {
            in_h[v] = true;
        }
        let face = faces.swap_remove(face_idx);
        let (f1, f2) = split_face(&face, &path);
        faces.push(f1);
        faces.push(f2);
    }
    Some(faces)
}

fn find_cycle(adj: &[Vec<usize>]) -> Option<Vec<usize>> {
    let n = adj.len();
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![usize::MAX; n];
    let mut stack = vec![(0usize, 0usize)];
    depth[0] = 0;
    while let Some(&mut (v, ref mut i)) = stack.last_mut() {
        if *i < adj[v].len() {
            let w = adj[v][*i];
            *i += 1;
            if depth[w] == usize::MAX {
                depth[w] = depth[v] + 1;
                parent[w] = v;
                stack.push((w, 0));
            } else if w != parent[v] && depth[w] < depth[v] {
                let mut cycle = vec![v];
                let mut x = v;
                while x != w {
                    x = parent[x];
                    cycle.push(x);
                }
                cycle.reverse();
                return Some(cycle);
            }
        } else {
            stack.pop();
        }
    }
    None
}

fn fragments(adj: &[Vec<usize>], in_h: &[bool], embedded: &BTreeSet<(usize, usize)>) -> Vec<Fragment> {
    let n = adj.len();
    let mut out = Vec::new();
    for a in 0..n {
        if !in_h[a] {
            continue;
        }
        for &b in &adj[a] {
            if a < b && in_h[b] && !embedded.contains(&(a, b)) {
                out.push(Fragment {
                    attachments: vec![a, b],
                    interior: vec![],
                    chord: Some((a, b)),
                });
            }
        }
    }
    let mut seen = vec![false; n];
    for s in 0..n {
        if in_h[s] || seen[s] {
            continue;
        }
        let mut interior = Vec::new();
        let mut attach = BTreeSet::new();
        let mut queue = VecDeque::from([s]);
        seen[s] = true;
        while let Some(v) = queue.pop_front() {
            interior.push(v);
            for &w in &adj[v] {
                if in_h[w] {
                    attach.insert(w);
                } else if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        out.push(Fragment {
            attachments: attach.into_iter().collect(),
            interior,
            chord: None,
        });
    }
    out
}

/// A path through the fragment between two distinct attachment vertices.
fn fragment_path(adj: &[Vec<usize>], in_h: &[bool], frag: &Fragment) -> Vec<usize> {
    if let Some((a, b)) = frag.chord {
        return vec![a, b];
    }
    let inside: BTreeSet<usize> = frag.interior.iter().copied().collect();
    let start = frag.attachments[0];
    let first = *adj[start]
        .iter()
        .find(|w| inside.contains(w))
        .expect("attachment touches fragment");
    let mut prev: BTreeMap<usize, usize> = BTreeMap::new();
    let mut queue = VecDeque::from([first]);
    prev.insert(first, start);
    while let Some(v) = queue.pop_front() {
        if let Some(&end) = adj[v].iter().find(|&&w| in_h[w] && w != start) {
            let mut path = vec![end, v];
            let mut x = v;
            while x != first {
                x = prev[&x];
                path.push(x);
            }
            path.push(start);
            path.reverse();
            return path;
        }
        for &w in &adj[v] {
            if inside.contains(&w) && !prev.contains_key(&w) {
                prev.insert(w, v);
                queue.push_back(w);
            }
        }
    }
    unreachable!("fragment of a 2-connected graph has two attachments")
}

fn split_face(face: &[usize], path: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let u = path[0];
    let w = *path.last().unwrap();
    let len = face.len();
    let i = face.iter().position(|&x| x == u).unwrap();
    let j = face.iter().position(|&x| x == w).unwrap();
    let inner = &path[1..path.len() - 1];
    let mut f1 = Vec::new();
    let mut k = i;
    loop {
        f1.push(face[k]);
        if k == j {
            break;
        }
        k = (k + 1) % len;
    }
    f1.extend(inner.iter().rev());
    let mut f2 = Vec::new();
    let mut k = j;
    loop {
        f2.push(face[k]);
        if k == i {
            break;
        }
        k = (k + 1) % len;
    }
    f2.extend(inner.iter());
    (f1, f2)
}

/// Converts consistently oriented face cycles into a rotation system where
/// a face walk arriving at `v` from `u` leaves towards the successor of `u`.
fn faces_to_rotation(n: usize, faces: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut succ: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new(); n];
    for f in faces {
        let len = f.len();
        for t in 0..len {
            let prev = f[(t + len - 1) % len];
            let next = f[(t + 1) % len];
            succ[f[t]].insert(prev, next);
        }
    }
    succ.into_iter()
        .map(|m| {
            let Some((&start, _)) = m.iter().next() else {
                return Vec::new();
            };
            let mut order = vec![start];
            let mut x = m[&start];
            while x != start && order.len() <= m.len() {
                order.push(x);
                x = m[&x];
            }
            order
        })
        .collect()
}

/// Deletes edges greedily while the remainder stays non-planar; the
/// survivors form a Kuratowski subdivision.
fn find_obstruction(n: usize, edges: &[Edge]) -> KuratowskiSubdivision {
    let mut kept: Vec<Edge> = edges.to_vec();
    let mut i = 0;
    while i < kept.len() {
        let mut trial = kept.clone();
        trial.remove(i);
        if embed(n, &trial).is_none() {
            kept = trial;
        } else {
            i += 1;
        }
    }
    let mut degree = vec![0usize; n];
    for e in &kept {
        degree[e.0] += 1;
        degree[e.1] += 1;
    }
    let branch_vertices: Vec<usize> = (0..n).filter(|&v| degree[v] >= 3).collect();
    let kind = if branch_vertices.len() == 5 {
        KuratowskiKind::K5
    } else {
        KuratowskiKind::K33
    };
    KuratowskiSubdivision {
        kind,
        branch_vertices,
        edges: kept,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> Graph {
        let mut e = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                e.push((a, b));
            }
        }
        Graph::from_edges(n, &e).unwrap()
    }

    fn k33() -> Graph {
        let mut e = Vec::new();
        for a in 0..3 {
            for b in 3..6 {
                e.push((a, b));
            }
        }
        Graph::from_edges(6, &e).unwrap()
    }

    fn check(g: &Graph) -> bool {
        let r = is_planar(g);
        match &r.witness {
            PlanarityWitness::Embedding(rot) => assert!(verify_embedding(g, rot), "bad embedding"),
            PlanarityWitness::Obstruction(obs) => assert!(verify_obstruction(g, obs), "bad obstruction"),
        }
        r.planar
    }

    #[test]
    fn kuratowski_graphs() {
        assert!(!check(&complete(5)));
        assert!(!check(&k33()));
        let PlanarityWitness::Obstruction(obs) = is_planar(&k33()).witness else {
            panic!()
        };
        assert_eq!(obs.kind, KuratowskiKind::K33);
        assert_eq!(obs.edges.len(), 9);
    }

    #[test]
    fn small_planar_graphs() {
        assert!(check(&complete(4)));
        assert!(check(&Graph::from_edges(1, &[]).unwrap()));
        assert!(check(&Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap()));
        // two triangles sharing a vertex plus a pendant edge
        let bowtie = Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4), (4, 5)]).unwrap();
        assert!(check(&bowtie));
    }

    #[test]
    fn petersen_is_not_planar() {
        let e = [
            (0, 1),
            (1, 2),
            (2, 3),
            (3, 4),
            (0, 4),
            (0, 5),
            (1, 6),
            (2, 7),
            (3, 8),
            (4, 9),
            (5, 7),
            (7, 9),
            (6, 9),
            (6, 8),
            (5, 8),
        ];
        assert!(!check(&Graph::from_edges(10, &e).unwrap()));
    }

    #[test]
    fn verifier_rejects_bad_rotation() {
        // K4 with one rotation reversed at a single vertex is a torus embedding
        let g = complete(4);
        let PlanarityWitness::Embedding(mut rot) = is_planar(&g).witness else {
            panic!()
        };
        assert!(verify_embedding(&g, &rot));
        rot.rotation[0].reverse();
        assert!(!verify_embedding(&g, &rot));
    }

    #[test]
    fn verifier_rejects_non_subdivision() {
        let g = complete(5);
        let obs = KuratowskiSubdivision {
            kind: KuratowskiKind::K5,
            branch_vertices: vec![0, 1, 2, 3, 4],
            edges: g.edges()[..9].to_vec(),
        };
        assert!(!verify_obstruction(&g, &obs));
    }
}
