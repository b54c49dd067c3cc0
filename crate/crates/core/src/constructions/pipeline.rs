//! The counterexample pipeline as a construction script.
//!
//! `K` bridges two cubes through a middle edge `z`; `R` is the Y-merge of
//! three copies of `K` at `z1`; `H` plants `K - z1` into the six-prism;
//! `D`, `F` and `N` are successive edge substitutions. Port and edge choices
//! are fixed so that every step meets the hypotheses of the rule that
//! certifies it (see the `certifier` module).

use crate::error::Result;

use super::dsl::{parse_script, Evaluation, Script};

/// Builds the pipeline around a prism over a `6j`-cycle; `j = 1` gives the
/// six-prism `S` and the 72-vertex graph `N`. Larger `j` yield the infinite
/// family, with `v(N) = 60 + 12j`.
pub fn family_script(j: usize) -> String {
    assert!(j >= 1, "family members start at j = 1");
    let m = 6 * j;
    let prism = if j == 1 { "S".to_string() } else { format!("Prism{m}") };
    let last = m - 1;
    format!(
        "\
# Q: cube (8 vertices), {prism}: prism over a {m}-cycle
let K = ebridge(Q@000-001, Q@000-001) by R1
base NoFactorContaining(K, z)
let R = ymerge(K@z1[z2]) by R2
let H = vsub(K@z1[z2], {prism}@o0) by R3
base NoFactorMinusVertexAvoiding(H, B.o{last}, p3)
let D = esub(K@z1-z2, H@p3) by R4
probe NoFactorMinusVertex(D, B.B.o{last})
let F = esub(Q@000-001, D@B.B.o{last}-B.A.A.000) by R5
let N = esub(K@z1-z2, F@n2) by R6
"
    )
}

pub fn default_script() -> String {
    family_script(1)
}

pub fn default_pipeline() -> Result<Script> {
    parse_script(&default_script())
}

/// Evaluates the default pipeline: bindings `K`, `R`, `H`, `D`, `F`, `N`.
pub fn pipeline_graphs() -> Result<Evaluation> {
    default_pipeline()?.evaluate()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pipeline_vertex_counts() {
        let ev = pipeline_graphs().unwrap();
        let v = |n: &str| ev.get(n).unwrap().n();
        assert_eq!(
            [v("K"), v("R"), v("H"), v("D"), v("F"), v("N")],
            [18, 54, 28, 46, 54, 72]
        );
    }

    #[test]
    fn family_grows_by_twelve() {
        for j in 1..=3 {
            let ev = parse_script(&family_script(j)).unwrap().evaluate().unwrap();
            assert_eq!(ev.get("N").unwrap().n(), 60 + 12 * j);
        }
    }

    #[test]
    fn evaluation_is_deterministic() {
        let a = pipeline_graphs().unwrap();
        let b = pipeline_graphs().unwrap();
        assert_eq!(a.get("N"), b.get("N"));
    }
}
