use lambdapack::certifier::{
    check_certificate, cross_check, replay_default, replay_pipeline, verify_base, Certificate, CheckMode, Fact,
    FactKind, ReplayOptions, Resolved, Rule,
};
use lambdapack::constructions::atlas;
use lambdapack::constructions::dsl::parse_script;
use lambdapack::constructions::pipeline::family_script;
use lambdapack::packing::{oracle_solve, Budget, PackingProblem};
use lambdapack::{Error, Graph};

fn replay(script: &str) -> lambdapack::Result<Certificate> {
    replay_pipeline(&parse_script(script)?, ReplayOptions::default(), &mut |_| {})
}

#[test]
fn k33_avoiding_an_edge_is_refuted() {
    let k33 = atlas("K33").unwrap();
    for &e in k33.edges() {
        let oracle = oracle_solve(&PackingProblem::factor(k33.clone()).forbid_edge(e)).unwrap();
        assert!(oracle.verdict.is_sat(), "oracle finds a factor avoiding {e}");
        let fact = Fact::new(FactKind::NoFactorAvoiding, &k33, Some("K33"), &[Resolved::Edge(e)]).unwrap();
        assert!(matches!(
            verify_base("s1", &fact, &k33, Budget::default()),
            Err(Error::Refuted(_))
        ));
    }
}

#[test]
fn base_rejects_bad_residue() {
    let g = Graph::from_edges(4, &[(0, 1), (1, 2)]).unwrap();
    let fact = Fact::new(FactKind::NoFactor, &g, None, &[]).unwrap();
    assert!(matches!(
        verify_base("s1", &fact, &g, Budget::default()),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn base_budget_exhaustion_is_an_error() {
    let s = atlas("S").unwrap();
    let e = s.edges()[0];
    let fact = Fact::new(FactKind::NoFactorContaining, &s, Some("S"), &[Resolved::Edge(e)]).unwrap();
    let r = verify_base("s1", &fact, &s, Budget::nodes(1));
    assert!(matches!(r, Err(Error::Budget(_)) | Err(Error::Refuted(_))), "{r:?}");
}

#[test]
fn default_certificate_round_trips() {
    let cert = replay_default().unwrap();
    let finals: Vec<String> = cert.final_conclusions().iter().map(|f| f.to_string()).collect();
    assert_eq!(finals.len(), 5);
    assert!(finals.contains(&"NoFactor(R)".to_string()));
    assert!(finals.contains(&"NoFactor(N)".to_string()));
    let rules: Vec<Rule> = cert.steps.iter().map(|s| s.rule).collect();
    for r in [Rule::R1, Rule::R2, Rule::R3, Rule::R4, Rule::R5, Rule::R6, Rule::Base] {
        assert!(rules.contains(&r), "{r} missing");
    }

    let text = cert.to_json().unwrap();
    assert_eq!(text, replay_default().unwrap().to_json().unwrap());
    let back = Certificate::from_json(&text).unwrap();
    let report = check_certificate(&back, CheckMode::Trusting).unwrap();
    assert_eq!(report.base_searches_rerun, 0);
    let strict = check_certificate(&back, CheckMode::Strict).unwrap();
    assert_eq!(strict.base_searches_rerun, 2);
    assert_eq!(report.final_facts, finals);
}

#[test]
fn tampering_is_detected() {
    let cert = replay_default().unwrap();
    let last = cert.steps.len() - 1;

    let mut bad = cert.clone();
    bad.steps[last].conclusion.vertices = 71;
    assert!(check_certificate(&bad, CheckMode::Trusting).is_err());

    let mut bad = cert.clone();
    bad.steps[last].conclusion.residue = 1;
    assert!(check_certificate(&bad, CheckMode::Trusting).is_err());

    let mut bad = cert.clone();
    bad.steps[last].premises = vec!["s404".into()];
    assert!(check_certificate(&bad, CheckMode::Trusting).is_err());

    let mut bad = cert.clone();
    let key = bad.graphs.keys().next().unwrap().clone();
    bad.graphs.get_mut(&key).unwrap().edges.pop();
    assert!(check_certificate(&bad, CheckMode::Trusting).is_err());

    let mut bad = cert.clone();
    bad.steps[last].side_conditions.clear();
    assert!(check_certificate(&bad, CheckMode::Trusting).is_err());

    let mut bad = cert;
    bad.steps[last].rule = Rule::R5;
    assert!(check_certificate(&bad, CheckMode::Trusting).is_err());
}

#[test]
fn wrong_residue_rule_is_rejected() {
    // F built from a 12-vertex left operand instead of Q.
    let script = family_script(1).replace("esub(Q@000-001, D@", "esub(S@o0-o1, D@");
    let err = replay(&script).unwrap_err();
    assert!(err.to_string().contains("side condition"), "{err}");
}

#[test]
fn rule_needs_its_premise() {
    let err = replay("let Y = ymerge(S@o0) by R2\n").unwrap_err();
    assert!(err.to_string().contains("premise"), "{err}");
    let cert = replay("let K = ebridge(Q@000-001, Q@000-001)\nlet H = vsub(K@z1[z2], S@o0) by R3\n").unwrap();
    assert_eq!(cert.steps.len(), 2);
    assert_eq!(cert.steps[1].premises, vec!["s1".to_string()]);
}

#[test]
fn cross_check_agrees_with_rules() {
    let cert = replay_default().unwrap();
    let checks = cross_check(&cert, 46, Budget::default()).unwrap();
    let facts: Vec<&str> = checks.iter().map(|c| c.fact.as_str()).collect();
    assert_eq!(checks.len(), 3, "{facts:?}");
    assert!(checks.iter().all(|c| c.outcome == "UNSAT"));
    let all = cross_check(&cert, 72, Budget::default()).unwrap();
    assert_eq!(all.len(), cert.steps.iter().filter(|s| s.rule != Rule::Base).count());
    assert!(all.iter().all(|c| c.outcome == "UNSAT"));
}

#[test]
fn family_members_certify() {
    for j in 1..=3 {
        let cert = replay(&family_script(j)).unwrap();
        let n = cert
            .final_conclusions()
            .into_iter()
            .find(|f| f.kind == FactKind::NoFactor && f.subject.as_deref() == Some("N"))
            .cloned()
            .unwrap();
        assert_eq!(n.vertices, 60 + 12 * j);
        check_certificate(&cert, CheckMode::Strict).unwrap();
    }
}

#[test]
fn probe_records_direct_search() {
    let cert = replay_default().unwrap();
    assert_eq!(cert.probes.len(), 1);
    let p = &cert.probes[0];
    assert_eq!(p.outcome, "UNSAT");
    assert_eq!(p.fact.vertices, 46);
    assert!(p.derived_by.is_some());
}
