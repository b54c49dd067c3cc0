//! `lambdapack` command-line front end.
//!
//! Results go to stdout (JSON by default), progress to stderr. Exit codes:
//! 0 success, 1 other failure, 2 parse or usage error, 3 precondition
//! violated, 4 budget exhausted, 5 a claimed fact was refuted.

mod commands;
mod input;

use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lambdapack::packing::Budget;
use lambdapack::Error;

#[derive(Debug, Parser)]
#[command(
    name = "lambdapack",
    version,
    about = "Exact Λ-packing and no-factor certificates for small graphs"
)]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    #[command(flatten)]
    pub budget: BudgetArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Debug, Clone, Args)]
pub struct BudgetArgs {
    /// Search node limit per solve.
    #[arg(long, global = true, env = "LAMBDAPACK_NODE_BUDGET")]
    pub node_budget: Option<u64>,

    /// Wall-clock limit per solve, in seconds.
    #[arg(long, global = true, env = "LAMBDAPACK_TIME_BUDGET")]
    pub time_budget: Option<f64>,
}

impl BudgetArgs {
    pub fn budget(&self) -> Budget {
        let mut b = Budget::default();
        if let Some(n) = self.node_budget {
            b.max_nodes = n;
        }
        if let Some(t) = self.time_budget {
            b.max_time = Duration::from_secs_f64(t.max(0.0));
        }
        b
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the named base graphs.
    Atlas,
    /// Evaluate a construction script or expression and emit the graph.
    Build {
        /// Script file or inline script.
        source: String,
        /// Emit this binding instead of the script output.
        #[arg(long)]
        binding: Option<String>,
    },
    /// Structural report: cubic, bipartite, planar, connectivity.
    Check {
        graph: String,
        #[arg(long)]
        binding: Option<String>,
        /// Also evaluate the constrained-factor clauses (cubic graphs only).
        #[arg(long)]
        predicates: bool,
    },
    /// Solve a packing or factor problem.
    Solve(SolveArgs),
    /// Replay a pipeline into a certificate, or verify one.
    Certify(CertifyArgs),
    /// Sample random cubic graphs and test the packing lower bound.
    Sample {
        #[arg(short = 'n', long)]
        n: usize,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Convert a graph between formats.
    Export {
        graph: String,
        #[arg(long)]
        binding: Option<String>,
    },
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Graph file, script or expression. Omit when using `--problem`.
    #[arg(required_unless_present = "problem")]
    pub graph: Option<String>,
    #[arg(long)]
    pub binding: Option<String>,
    /// Decide whether a Λ-factor exists.
    #[arg(long, conflicts_with = "max")]
    pub factor: bool,
    /// Compute a maximum packing (the default).
    #[arg(long)]
    pub max: bool,
    /// Edge every solution must use (`u-v` or an edge label).
    #[arg(long = "force-edge")]
    pub force_edge: Vec<String>,
    /// Edge no solution may use.
    #[arg(long = "avoid-edge")]
    pub avoid_edge: Vec<String>,
    #[arg(long = "delete-vertex")]
    pub delete_vertex: Vec<String>,
    /// Problem JSON file; other problem flags are ignored.
    #[arg(long, conflicts_with = "graph")]
    pub problem: Option<String>,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    /// `default` or a pipeline script file.
    #[arg(long, default_value = "default", conflicts_with_all = ["family", "verify"])]
    pub pipeline: String,
    /// Pipeline over a prism of a 6J-cycle.
    #[arg(long, value_name = "J", conflicts_with = "verify")]
    pub family: Option<usize>,
    /// Write the certificate here and print a summary instead.
    #[arg(long)]
    pub out: Option<String>,
    /// Check an existing certificate file.
    #[arg(long)]
    pub verify: Option<String>,
    /// With `--verify`, re-run every base search.
    #[arg(long, requires = "verify")]
    pub strict: bool,
    /// Also search directly for derived facts on small subjects.
    #[arg(long)]
    pub cross_check: bool,
    /// Vertex limit for `--cross-check`.
    #[arg(long, default_value_t = 46)]
    pub cross_check_max: usize,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } | Error::Json(_) | Error::Resolve { .. } => 2,
        Error::Precondition(_) => 3,
        Error::Budget(_) => 4,
        Error::Refuted(_) => 5,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
