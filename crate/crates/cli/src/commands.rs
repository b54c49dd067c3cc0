use std::fs;

use lambdapack::certifier::{check_certificate, cross_check, replay_pipeline, Certificate, CheckMode, ReplayOptions};
use lambdapack::connectivity::connectivity_at_least;
use lambdapack::constructions::dsl::parse_script;
use lambdapack::constructions::pipeline::{default_script, family_script};
use lambdapack::constructions::{atlas, provenance_blocks, ATLAS_NAMES};
use lambdapack::packing::{
    equivalence_predicates, sample_cubic_batch, solve, PackingProblem, PackingResult, ProblemJson, Verdict,
};
use lambdapack::planarity::{is_planar, verify_embedding, verify_obstruction, PlanarityWitness};
use lambdapack::{io, par, Error, Graph, Result};
use serde_json::{json, Value};

use crate::input::{load_graph, parse_edge, parse_vertex};
use crate::{CertifyArgs, Cli, Command, Format, SolveArgs};

pub fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Atlas => atlas_cmd(cli.format),
        Command::Build { source, binding } | Command::Export { graph: source, binding } => {
            let g = load_graph(source, binding.as_deref())?;
            emit_graph(&g, cli.format);
            Ok(0)
        }
        Command::Check {
            graph,
            binding,
            predicates,
        } => {
            let g = load_graph(graph, binding.as_deref())?;
            check_cmd(&g, *predicates, cli)
        }
        Command::Solve(args) => solve_cmd(args, cli),
        Command::Certify(args) => certify_cmd(args, cli),
        Command::Sample { n, count, seed } => sample_cmd(*n, *count, *seed, cli),
    }
}

fn no_dot(format: Format) -> Result<()> {
    if format == Format::Dot {
        return Err(Error::Precondition("dot output is only available for graphs".into()));
    }
    Ok(())
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json value serializes"));
}

fn emit_graph(g: &Graph, format: Format) {
    match format {
        Format::Json => println!("{}", io::to_json(g)),
        Format::Dot => print!("{}", io::to_dot(g)),
        Format::Text => {
            println!("{} vertices, {} edges", g.n(), g.edge_count());
            for e in g.edges() {
                match g.edge_label(*e) {
                    Some(l) => println!("{} {} {l}", g.label(e.0), g.label(e.1)),
                    None => println!("{} {}", g.label(e.0), g.label(e.1)),
                }
            }
        }
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn atlas_cmd(format: Format) -> Result<u8> {
    no_dot(format)?;
    let mut rows = Vec::new();
    for name in ATLAS_NAMES {
        let g = atlas(name)?;
        rows.push(json!({
            "name": name,
            "n": g.n(),
            "m": g.edge_count(),
            "cubic": g.is_cubic(),
            "bipartite": g.is_bipartite(),
            "planar": is_planar(&g).planar,
        }));
    }
    match format {
        Format::Text => {
            for r in &rows {
                println!("{:<4} n={:<3} m={}", r["name"].as_str().unwrap_or(""), r["n"], r["m"]);
            }
            println!("Prism<m> for m >= 3: n=2m, m=3m");
        }
        _ => print_json(&json!({ "graphs": rows, "families": ["Prism<m>"] })),
    }
    Ok(0)
}

fn check_cmd(g: &Graph, predicates: bool, cli: &Cli) -> Result<u8> {
    no_dot(cli.format)?;
    let planar = is_planar(g);
    let verified = match &planar.witness {
        PlanarityWitness::Embedding(rot) => verify_embedding(g, rot),
        PlanarityWitness::Obstruction(obs) => verify_obstruction(g, obs),
    };
    let mut connectivity = Vec::new();
    for k in 1..=3 {
        match connectivity_at_least(g, k) {
            Ok(r) => connectivity.push(serde_json::to_value(r)?),
            Err(Error::Precondition(_)) => {}
            Err(e) => return Err(e),
        }
    }
    let profile = g.degree_profile();
    let mut report = json!({
        "n": g.n(),
        "m": g.edge_count(),
        "cubic": g.is_cubic(),
        "maxDegree": profile.max_degree,
        "bipartite": g.is_bipartite(),
        "bipartition": g.bipartition(),
        "planar": planar.planar,
        "planarityWitness": planar.witness,
        "witnessVerified": verified,
        "connectivity": connectivity,
    });
    if predicates {
        let p = equivalence_predicates(g, cli.budget.budget())?;
        report["predicates"] = serde_json::to_value(p)?;
    }
    match cli.format {
        Format::Text => {
            println!("vertices: {}, edges: {}", g.n(), g.edge_count());
            println!("cubic: {}", yes(g.is_cubic()));
            println!("bipartite: {}", yes(g.is_bipartite()));
            println!("planar: {} (witness verified: {})", yes(planar.planar), yes(verified));
            for c in report["connectivity"].as_array().into_iter().flatten() {
                println!("{}-connected: {}", c["k"], yes(c["holds"].as_bool().unwrap_or(false)));
            }
            if let Some(p) = report.get("predicates") {
                for (k, v) in p["clauses"].as_object().into_iter().flatten() {
                    println!("{k}: {}", v["value"].as_str().unwrap_or("?"));
                }
            }
        }
        _ => print_json(&report),
    }
    Ok(0)
}

fn build_problem(args: &SolveArgs, cli: &Cli) -> Result<PackingProblem> {
    if let Some(path) = &args.problem {
        let j: ProblemJson = serde_json::from_str(&fs::read_to_string(path)?)?;
        let mut p = PackingProblem::try_from(j)?;
        if cli.budget.node_budget.is_some() || cli.budget.time_budget.is_some() {
            p = p.with_budget(cli.budget.budget());
        }
        return Ok(p);
    }
    let source = args.graph.as_deref().expect("clap requires a graph without --problem");
    let g = load_graph(source, args.binding.as_deref())?;
    let seams = provenance_blocks(&g);
    let mut p = if args.factor {
        PackingProblem::factor(g.clone())
    } else {
        PackingProblem::max_packing(g.clone())
    };
    for e in &args.force_edge {
        p = p.force_edge(parse_edge(&g, e)?);
    }
    for e in &args.avoid_edge {
        p = p.forbid_edge(parse_edge(&g, e)?);
    }
    for v in &args.delete_vertex {
        p = p.delete_vertex(parse_vertex(&g, v)?);
    }
    let p = p.with_seams(seams).with_budget(cli.budget.budget());
    p.validate()?;
    Ok(p)
}

fn solve_cmd(args: &SolveArgs, cli: &Cli) -> Result<u8> {
    no_dot(cli.format)?;
    let problem = build_problem(args, cli)?;
    eprintln!(
        "solving: {} active vertices, {} edges",
        problem.active_vertices(),
        problem.graph.edge_count()
    );
    let PackingResult { verdict, stats } = solve(&problem)?;
    eprintln!("explored {} nodes", stats.nodes);
    let g = &problem.graph;
    let labelled: Vec<String> = verdict
        .witness()
        .unwrap_or(&[])
        .iter()
        .map(|p| {
            let [a, c, b] = [p.ends.0, p.center, p.ends.1].map(|v| g.label(v).to_string());
            format!("{a}-{c}-{b}")
        })
        .collect();
    match cli.format {
        Format::Text => {
            match &verdict {
                Verdict::Sat { .. } => println!("SAT"),
                Verdict::Unsat => println!("UNSAT"),
                Verdict::Optimum { value, .. } => println!("lambda = {value}"),
                Verdict::Indeterminate {
                    lower_bound,
                    upper_bound,
                    ..
                } => {
                    let show = |b: &Option<usize>| b.map_or("?".to_string(), |v| v.to_string());
                    println!(
                        "INDETERMINATE: {} <= lambda <= {}",
                        show(lower_bound),
                        show(upper_bound)
                    )
                }
            }
            for l in &labelled {
                println!("  {l}");
            }
        }
        _ => print_json(&json!({
            "n": g.n(),
            "activeVertices": problem.active_vertices(),
            "mode": problem.mode,
            "verdict": verdict,
            "witnessLabels": labelled,
            "stats": stats,
        })),
    }
    Ok(if verdict.is_indeterminate() { 4 } else { 0 })
}

fn certify_cmd(args: &CertifyArgs, cli: &Cli) -> Result<u8> {
    no_dot(cli.format)?;
    let budget = cli.budget.budget();
    if let Some(path) = &args.verify {
        let cert = Certificate::from_json(&fs::read_to_string(path)?)?;
        let mode = if args.strict {
            CheckMode::Strict
        } else {
            CheckMode::Trusting
        };
        let report = check_certificate(&cert, mode)?;
        eprintln!("certificate valid: {} steps", report.steps);
        let mut out = json!({ "valid": true, "report": report });
        if args.cross_check {
            out["crossCheck"] = serde_json::to_value(cross_check(&cert, args.cross_check_max, budget)?)?;
        }
        match cli.format {
            Format::Text => {
                println!(
                    "valid ({} steps, {} base searches re-run)",
                    report.steps, report.base_searches_rerun
                );
                for f in &report.final_facts {
                    println!("  {f}");
                }
                for c in out["crossCheck"].as_array().into_iter().flatten() {
                    println!("cross-check {} {}: {}", c["step"], c["fact"], c["outcome"]);
                }
            }
            _ => print_json(&out),
        }
        return Ok(0);
    }

    let text = match (args.family, args.pipeline.as_str()) {
        (Some(j), _) if j >= 1 => family_script(j),
        (Some(_), _) => return Err(Error::Precondition("family index starts at 1".into())),
        (None, "default") => default_script(),
        (None, path) => fs::read_to_string(path)?,
    };
    let script = parse_script(&text)?;
    let opts = ReplayOptions {
        base_budget: budget,
        probe_budget: budget,
    };
    let cert = replay_pipeline(&script, opts, &mut |line| eprintln!("{line}"))?;
    let checks = if args.cross_check {
        Some(cross_check(&cert, args.cross_check_max, budget)?)
    } else {
        None
    };
    let finals: Vec<Value> = cert
        .final_conclusions()
        .iter()
        .map(|f| json!({ "fact": f.to_string(), "vertices": f.vertices }))
        .collect();

    if let Some(out) = &args.out {
        fs::write(out, cert.to_json()?)?;
        eprintln!("certificate written to {out}");
    }
    match cli.format {
        Format::Text => {
            for s in &cert.steps {
                println!("{} {}: {}", s.id, s.rule, s.conclusion);
            }
            for p in &cert.probes {
                println!("probe {}: {}", p.fact, p.outcome);
            }
            for c in checks.iter().flatten() {
                println!("cross-check {} {}: {}", c.step, c.fact, c.outcome);
            }
        }
        _ if args.out.is_some() || checks.is_some() => {
            let mut summary = json!({
                "steps": cert.steps.len(),
                "finalFacts": finals,
                "probes": cert.probes,
                "notes": cert.notes,
            });
            if let Some(c) = &checks {
                summary["crossCheck"] = serde_json::to_value(c)?;
            }
            print_json(&summary);
        }
        _ => println!("{}", cert.to_json()?),
    }
    Ok(0)
}

fn sample_cmd(n: usize, count: usize, seed: u64, cli: &Cli) -> Result<u8> {
    no_dot(cli.format)?;
    let graphs = sample_cubic_batch(n, count, seed)?;
    let bound = n.div_ceil(4);
    let budget = cli.budget.budget();
    eprintln!("solving {count} cubic graphs on {n} vertices");
    let results = par::map(&graphs, |g| {
        solve(&PackingProblem::max_packing(g.clone()).with_budget(budget))
    });
    let mut lambdas = Vec::new();
    let mut violations = Vec::new();
    let mut undecided = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        match r?.verdict {
            Verdict::Optimum { value, .. } => {
                if value < bound {
                    violations.push(i);
                }
                lambdas.push(json!(value));
            }
            Verdict::Indeterminate {
                lower_bound,
                upper_bound,
                ..
            } => {
                if upper_bound.is_some_and(|u| u < bound) {
                    violations.push(i);
                } else if lower_bound.unwrap_or(0) < bound {
                    undecided.push(i);
                }
                lambdas.push(json!({ "lowerBound": lower_bound, "upperBound": upper_bound }));
            }
            _ => unreachable!("maximum packing yields an optimum or bounds"),
        }
    }
    let satisfied = count - violations.len() - undecided.len();
    match cli.format {
        Format::Text => println!("{satisfied}/{count} satisfy lambda >= {bound}"),
        _ => print_json(&json!({
            "n": n,
            "count": count,
            "seed": seed,
            "bound": bound,
            "satisfied": satisfied,
            "violations": violations,
            "undecided": undecided,
            "lambdas": lambdas,
        })),
    }
    Ok(if !violations.is_empty() {
        5
    } else if !undecided.is_empty() {
        4
    } else {
        0
    })
}
