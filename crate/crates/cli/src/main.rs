//! Command-line front end: one JSON report per invocation on standard output.
//!
//! Exit status is 0 whenever a verdict was computed (negative or not), 2 on
//! malformed input and 3 when the step budget ran out.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod report;

use report::{Ctx, Failure, EXIT_BUDGET, EXIT_INPUT};

const SCHEMA: &str = include_str!("../schema/report.schema.json");

#[derive(Parser, Debug)]
#[command(name = "smoothclass", version, about = "Pre-dimension, closure and convex Ramsey computations on finite graphs")]
struct Cli {
    /// Print the JSON schema of the reports and exit.
    #[arg(long)]
    schema: bool,
    /// Step budget for searches.
    #[arg(long, global = true, default_value_t = 20_000_000)]
    budget: u64,
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// δ_α of a graph, of an induced subset, or relative to a base.
    Delta {
        graph: PathBuf,
        #[arg(long)]
        alpha: String,
        /// Comma-separated vertex names; defaults to all vertices.
        #[arg(long)]
        set: Option<String>,
        /// Base for the relative value δ(set / over).
        #[arg(long)]
        over: Option<String>,
    },
    /// Whether `sub ≤_α within` inside the host `sup`.
    Closed {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        sub: String,
        #[arg(long)]
        sup: PathBuf,
        /// Upper set; defaults to all of `sup`.
        #[arg(long)]
        within: Option<String>,
        /// Test `<_α` instead.
        #[arg(long)]
        strict: bool,
    },
    /// Least closed superset of a vertex set.
    Closure {
        graph: PathBuf,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        set: String,
    },
    /// Membership in K_α^+, K_α^f or K_α^μ.
    Member {
        graph: PathBuf,
        /// Class description JSON.
        #[arg(long, conflicts_with = "alpha")]
        spec: Option<PathBuf>,
        /// Shorthand for K_α^+.
        #[arg(long)]
        alpha: Option<String>,
    },
    /// Maximum density max e/v over induced subgraphs.
    Maxdensity { graph: PathBuf },
    /// η*: largest minimum degree of a subgraph.
    Degeneracy { graph: PathBuf },
    /// Density certificate against C → (B)_r.
    RamseyCert {
        #[arg(long = "B")]
        b: PathBuf,
        #[arg(long = "C")]
        c: PathBuf,
        #[arg(short = 'r')]
        r: usize,
    },
    /// The cycle argument against the one-point Ramsey property.
    OnePoint {
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long, conflicts_with = "alpha")]
        spec: Option<PathBuf>,
        #[arg(short = 'n')]
        n: usize,
        #[arg(short = 'r')]
        r: usize,
        #[arg(long)]
        ordered: bool,
    },
    /// Exact decision of the convex Ramsey condition for a 0/1 matrix.
    Convex {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, default_value = "1/2")]
        threshold: String,
    },
    /// Census of all n×m matrices with distinct rows.
    Classify {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        #[arg(long, default_value = "1/2")]
        threshold: String,
    },
    /// Closed copies of a pattern in a window.
    Embeddings {
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        window: PathBuf,
        #[arg(long)]
        alpha: String,
    },
    /// Tree-pair verdict for (A; B) on a window.
    Treepair {
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Inductive colouring of a tree-pair window from the rows of a matrix.
    Color {
        #[arg(long)]
        matrix: PathBuf,
        #[command(flatten)]
        pair: PairArgs,
        /// 1-based row given to each component's first copy.
        #[arg(long, default_value_t = 1)]
        root_row: usize,
        /// 1-based index, in the listing of closed B-copies, of the copy
        /// coloured first.
        #[arg(long, default_value_t = 1)]
        root_copy: usize,
    },
    /// The triangle/cycle witness pair.
    #[command(subcommand)]
    Witness(WitnessCommand),
    /// 0-minimally algebraic extensions.
    #[command(subcommand, name = "zero-min")]
    ZeroMin(ZeroMinCommand),
}

#[derive(Args, Debug)]
struct PairArgs {
    #[arg(long = "A")]
    a: PathBuf,
    #[arg(long = "B")]
    b: PathBuf,
    #[arg(long)]
    window: PathBuf,
    #[arg(long, default_value = "2/1")]
    alpha: String,
}

#[derive(Subcommand, Debug)]
enum WitnessCommand {
    /// Write A.json, B.json and metadata.json.
    Build {
        #[arg(long)]
        out: PathBuf,
        /// Smaller cycle lengths with the same shape.
        #[arg(long)]
        reduced: bool,
    },
    /// Check every claim about the pair.
    Verify {
        #[arg(long)]
        reduced: bool,
    },
    /// Glue copies of B along triangles and write the window.
    Window {
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        reduced: bool,
        /// `HOST:T:U` (1-based): glue triangle U of a new copy onto triangle
        /// T of placed copy HOST. Repeatable.
        #[arg(long = "extend")]
        extend: Vec<String>,
    },
}

#[derive(Subcommand, Debug)]
enum ZeroMinCommand {
    /// D_m: an m-cycle attached to A, 0-minimally algebraic over it at α = 2.
    Build {
        #[arg(long)]
        base: PathBuf,
        #[arg(short = 'm')]
        m: usize,
        /// Also write the graph here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify a set over a disjoint base.
    Classify {
        host: PathBuf,
        #[arg(long)]
        set: String,
        #[arg(long)]
        over: String,
        #[arg(long, default_value = "2/1")]
        alpha: String,
    },
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    if cli.schema {
        print!("{SCHEMA}");
        return ExitCode::SUCCESS;
    }
    let Some(command) = cli.command else {
        eprintln!("error: a subcommand is required (see --help)");
        return ExitCode::from(EXIT_INPUT);
    };
    if let Some(n) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot start {n} workers: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    }
    let mut ctx = Ctx::new(cli.budget);
    let args = argv[1..].to_vec();
    let name = commands::name(&command);
    let body = match commands::run(command, &mut ctx) {
        Ok(body) => body,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_INPUT);
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("error: {msg}");
            ctx.exhausted = true;
            let mut body = serde_json::Map::new();
            body.insert("error".into(), msg.into());
            body
        }
    };
    let exhausted = ctx.exhausted;
    let report = ctx.finish(name, &args, body);
    println!("{}", serde_json::to_string_pretty(&report).expect("report serialises"));
    if exhausted {
        ExitCode::from(EXIT_BUDGET)
    } else {
        ExitCode::SUCCESS
    }
}
