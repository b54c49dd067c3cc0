use lambdapack::connectivity::connectivity_at_least;
use lambdapack::constructions::dsl::{build, parse, parse_script};
use lambdapack::constructions::pipeline::{family_script, pipeline_graphs};
use lambdapack::constructions::{atlas, ebridge, esub, vsub, ymerge, ymerge3, PortedEdge, PortedVertex};
use lambdapack::planarity::is_planar;
use lambdapack::{Error, Graph};

fn connectivity(g: &Graph) -> usize {
    (1..=3)
        .take_while(|&k| connectivity_at_least(g, k).map(|r| r.holds).unwrap_or(false))
        .last()
        .unwrap_or(0)
}

#[derive(Debug, PartialEq, Eq, Clone, Copy)]
struct Props {
    k: usize,
    cubic: bool,
    bipartite: bool,
    planar: bool,
}

fn props(g: &Graph) -> Props {
    Props {
        k: connectivity(g),
        cubic: g.is_cubic(),
        bipartite: g.is_bipartite(),
        planar: is_planar(g).planar,
    }
}

fn operands() -> Vec<(&'static str, Graph)> {
    ["K4", "K33", "Q", "S", "Prism5"]
        .iter()
        .map(|n| (*n, atlas(n).unwrap()))
        .collect()
}

fn port_orders(g: &Graph, v: usize) -> Vec<PortedVertex> {
    let nb = g.neighbors(v).unwrap();
    let (a, b, c) = (nb[0], nb[1], nb[2]);
    [[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]]
        .into_iter()
        .map(|p| PortedVertex::new(g, v, p).unwrap())
        .collect()
}

/// Backtracking isomorphism test for small graphs.
fn isomorphic(g: &Graph, h: &Graph) -> bool {
    if g.n() != h.n() || g.edge_count() != h.edge_count() {
        return false;
    }
    fn extend(g: &Graph, h: &Graph, map: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        let v = map.len();
        if v == g.n() {
            return true;
        }
        for w in 0..h.n() {
            if used[w] || g.degree(v) != h.degree(w) {
                continue;
            }
            if (0..v).all(|u| g.has_edge(u, v) == h.has_edge(map[u], w)) {
                map.push(w);
                used[w] = true;
                if extend(g, h, map, used) {
                    return true;
                }
                map.pop();
                used[w] = false;
            }
        }
        false
    }
    extend(g, h, &mut Vec::new(), &mut vec![false; h.n()])
}

#[test]
fn vsub_closure_grid() {
    let ops = operands();
    let mut checked = 0;
    for (na, ga) in &ops {
        let pa = props(ga);
        for (nb, gb) in &ops {
            let pb = props(gb);
            for a in [0, ga.n() - 1] {
                for b in 0..gb.n() {
                    for ports in port_orders(gb, b) {
                        let g = vsub(ga, &PortedVertex::ascending(ga, a).unwrap(), gb, &ports).unwrap();
                        assert_eq!(g.n(), ga.n() + gb.n() - 2);
                        let p = props(&g);
                        let ctx = format!("vsub({na}@{a}, {nb}@{b}) {ports:?}");
                        assert!(p.cubic, "{ctx}");
                        assert!(p.k >= pa.k.min(pb.k), "{ctx}: {p:?}");
                        if pa.bipartite && pb.bipartite {
                            assert!(p.bipartite, "{ctx}");
                        }
                        if pa.planar && pb.planar {
                            assert!(p.planar, "{ctx}");
                        }
                        for label in ["p1", "p2", "p3"] {
                            assert!(g.edge_by_label(label).is_some());
                        }
                        checked += 1;
                    }
                }
            }
        }
    }
    assert!(checked > 500);
}

#[test]
fn ymerge_closure() {
    let ops = operands();
    for (i, (n1, g1)) in ops.iter().enumerate() {
        for (n2, g2) in ops.iter().skip(i) {
            for (n3, g3) in ops.iter().skip(i) {
                let parts = [
                    PortedVertex::ascending(g1, 0).unwrap(),
                    PortedVertex::ascending(g2, 1).unwrap(),
                    PortedVertex::ascending(g3, g3.n() - 1).unwrap(),
                ];
                let g = ymerge3([(g1, &parts[0]), (g2, &parts[1]), (g3, &parts[2])]).unwrap();
                let ctx = format!("ymerge3({n1}, {n2}, {n3})");
                assert_eq!(g.n(), g1.n() + g2.n() + g3.n(), "{ctx}");
                let p = props(&g);
                let k = [g1, g2, g3].iter().map(|x| connectivity(x)).min().unwrap();
                assert!(p.cubic && p.k >= k, "{ctx}: {p:?}");
                if [g1, g2, g3].iter().all(|x| x.is_bipartite()) {
                    assert!(p.bipartite, "{ctx}");
                }
                for prefix in ["Y1.", "Y2.", "Y3."] {
                    let block: Vec<usize> = (0..g.n()).filter(|&v| g.label(v).starts_with(prefix)).collect();
                    assert_eq!(g.edge_cut(&block).unwrap().size(), 3, "{ctx}");
                }
            }
        }
    }
}

#[test]
fn esub_and_ebridge_closure() {
    let mut ops = operands();
    let pipeline = pipeline_graphs().unwrap();
    for name in ["K", "H", "D"] {
        ops.push((name, pipeline.get(name).unwrap().clone()));
    }
    for (na, ga) in &ops {
        for (nb, gb) in &ops {
            if ga.n() + gb.n() > 60 {
                continue;
            }
            let (pa, pb) = (props(ga), props(gb));
            let ea = ga.edges()[ga.edge_count() / 2];
            for (i, eb) in gb.edges().iter().enumerate().step_by(3) {
                let a = PortedEdge::new(ga, ea.0, ea.1).unwrap();
                let b = if i % 2 == 0 {
                    PortedEdge::new(gb, eb.0, eb.1).unwrap()
                } else {
                    PortedEdge::new(gb, eb.1, eb.0).unwrap()
                };
                let s = esub(ga, &a, gb, &b).unwrap();
                let (t, z) = ebridge(ga, &a, gb, &b).unwrap();
                assert_eq!(s.n(), ga.n() + gb.n());
                assert_eq!(t.n(), ga.n() + gb.n() + 2);
                assert_eq!(t.edge_by_label("z"), Some(z));
                assert_eq!(t.degree(z.0), 3);
                assert_eq!(t.degree(z.1), 3);
                for g in [&s, &t] {
                    let p = props(g);
                    let ctx = format!("{na} * {nb} at {eb}");
                    assert!(p.cubic, "{ctx}");
                    assert!(p.k >= pa.k.min(pb.k).min(2), "{ctx}: {p:?}");
                    if pa.bipartite && pb.bipartite {
                        assert!(p.bipartite, "{ctx}");
                    }
                    if pa.planar && pb.planar {
                        assert!(p.planar, "{ctx}");
                    }
                }
            }
        }
    }
}

#[test]
fn k4_composites_have_known_shape() {
    let k4 = atlas("K4").unwrap();
    for a in 0..4 {
        for b in 0..4 {
            for ports in port_orders(&k4, b) {
                let g = vsub(&k4, &PortedVertex::ascending(&k4, a).unwrap(), &k4, &ports).unwrap();
                assert!(isomorphic(&g, &atlas("Prism3").unwrap()));
            }
        }
    }

    // K3,3 with each vertex of one side blown up into a triangle
    let mut edges = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            let t = 3 + 3 * i + j;
            edges.push((j, t));
            edges.push((t, 3 + 3 * i + (j + 1) % 3));
        }
    }
    let expected = Graph::from_edges(12, &edges).unwrap();
    let y = ymerge(&k4, &PortedVertex::ascending(&k4, 0).unwrap()).unwrap();
    assert_eq!(y.n(), 12);
    assert!(isomorphic(&y, &expected));
    assert!(!isomorphic(&y, &atlas("S").unwrap()));
}

#[test]
fn pipeline_graphs_match_captions() {
    let ev = pipeline_graphs().unwrap();
    let expected = [("K", 18), ("R", 54), ("H", 28), ("D", 46), ("F", 54), ("N", 72)];
    for (name, v) in expected {
        let g = ev.get(name).unwrap();
        assert_eq!(g.n(), v, "{name}");
        let p = props(g);
        assert!(p.cubic && p.bipartite && p.k >= 2, "{name}: {p:?}");
        if name != "R" {
            assert!(p.planar, "{name}");
        }
    }
    assert!(ev.get("K").unwrap().edge_by_label("z").is_some());
}

#[test]
fn nested_expression_equals_pipeline_binding() {
    let k = "ebridge(Q@000-001, Q@000-001)";
    let h = format!("vsub({k}@z1[z2], S@o0)");
    let d = format!("esub({k}@z1-z2, {h}@p3)");
    let f = format!("esub(Q@000-001, {d}@B.B.o5-B.A.A.000)");
    let built = build(&parse(&f).unwrap()).unwrap();
    let ev = pipeline_graphs().unwrap();
    assert_eq!(&built, ev.get("F").unwrap());
    assert_eq!(build(&parse("atlas(Q)").unwrap()).unwrap(), atlas("Q").unwrap());
}

#[test]
fn build_is_deterministic() {
    let s = family_script(1);
    let a = parse_script(&s).unwrap().evaluate().unwrap();
    let b = parse_script(&s).unwrap().evaluate().unwrap();
    for ((na, ga), (nb, gb)) in a.bindings.iter().zip(&b.bindings) {
        assert_eq!(na, nb);
        assert_eq!(ga, gb);
        assert_eq!(lambdapack::io::to_json(ga), lambdapack::io::to_json(gb));
    }
}

#[test]
fn family_members_grow_by_twelve() {
    for j in 1..=3 {
        let ev = parse_script(&family_script(j)).unwrap().evaluate().unwrap();
        let n = ev.get("N").unwrap();
        assert_eq!(n.n(), 60 + 12 * j);
        assert!(n.is_cubic() && n.is_bipartite());
    }
}

#[test]
fn diagnostics() {
    match parse("vsub(Q") {
        Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (1, 7)),
        other => panic!("expected a parse error, got {other:?}"),
    }
    assert!(matches!(
        build(&parse("vsub(Q@nope, Q@000)").unwrap()),
        Err(Error::Resolve { .. })
    ));
    assert!(parse("atlas(Nope)").is_err() || build(&parse("atlas(Nope)").unwrap()).is_err());
    let p3 = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
    let q = atlas("Q").unwrap();
    assert!(matches!(
        vsub(
            &q,
            &PortedVertex::ascending(&q, 0).unwrap(),
            &p3,
            &PortedVertex {
                vertex: 1,
                ports: [0, 2, 2]
            }
        ),
        Err(Error::Construction(_))
    ));
    assert!(PortedEdge::new(&q, 0, 7).is_err());
}
