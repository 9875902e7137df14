mod commands;
mod format;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mothergraph::schreier::DEFAULT_VERTEX_CAP;

#[derive(Parser)]
#[command(
    name = "mothergraph",
    version,
    about = "Schreier graphs of mother groups on rooted trees: effective \
             resistances and weighted cutset lower bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a level-n Schreier graph and write it as JSON (and optionally DOT)
    Build(BuildArgs),
    /// Effective resistance between two vertex sets
    Resist(ResistArgs),
    /// Certified lower bound on Res({v̂ < 2^s}, {v̂ >= 2^t})
    Bound(BoundArgs),
    /// Verification suites; nonzero exit on any counterexample
    Verify(VerifyArgs),
    /// Sweep t and emit the bound-versus-resistance scaling CSV
    Scaling(ScalingArgs),
}

#[derive(Args)]
struct ShapeArgs {
    /// Digit sizes: one value for a constant shape, a comma list for a
    /// repeating pattern (e.g. `--m 3,2,4`)
    #[arg(long, default_value = "2", conflicts_with = "m_list")]
    m: String,
    /// Explicit digit sizes, padded by the last value up to the level
    #[arg(long = "m-list")]
    m_list: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Float,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BoundMode {
    Exact,
    Float,
    /// Skip the solver; report the bound only
    None,
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    shape: ShapeArgs,
    /// Generator degree (0, 1 or 2)
    #[arg(long)]
    d: i32,
    /// Tree level (word length)
    #[arg(long)]
    n: usize,
    /// Keep raw digit words instead of the binary projection
    #[arg(long)]
    raw: bool,
    #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
    cap: usize,
    /// Output path for the graph JSON (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a DOT rendering, vertices ordered by linear position
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Args)]
struct ResistArgs {
    /// Read a graph JSON instead of building one
    #[arg(long, conflicts_with_all = ["d", "n", "raw"])]
    graph: Option<PathBuf>,
    #[command(flatten)]
    shape: ShapeArgs,
    #[arg(long, required_unless_present = "graph")]
    d: Option<i32>,
    #[arg(long, required_unless_present = "graph")]
    n: Option<usize>,
    #[arg(long)]
    raw: bool,
    /// Source set as linear positions: comma-separated values or `lo..hi` ranges
    #[arg(long = "A")]
    a: String,
    /// Sink set, same grammar
    #[arg(long = "B")]
    b: String,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,
    #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
    cap: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundArgs {
    #[command(flatten)]
    shape: ShapeArgs,
    #[arg(long)]
    d: i32,
    /// Source scale: A = {v̂ < 2^s}
    #[arg(long)]
    s: u32,
    /// Sink scale: B = {v̂ >= 2^t}
    #[arg(long)]
    t: u32,
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value_t = BoundMode::Exact)]
    mode: BoundMode,
    #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
    cap: usize,
    /// Certificate JSON with cutsets and the full allocation
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-cutset conductance CSV
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(subcommand)]
    suite: VerifySuite,
}

#[derive(Subcommand)]
enum VerifySuite {
    /// Cutset membership rule against the linear-order definition
    Lemma {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long)]
        d: i32,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
        cap: usize,
    },
    /// Closed-form cutset weight sums against enumeration
    Weights {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long)]
        d: i32,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
        cap: usize,
    },
    /// Random-instance lower bounds and optimal allocations vs the solver
    Wnw {
        #[arg(long, default_value_t = 200)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "max-vertices", default_value_t = 32)]
        max_vertices: usize,
    },
    /// Action-built edge set against the criterion-built one
    Action {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long)]
        d: i32,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
        cap: usize,
    },
}

#[derive(Args)]
struct ScalingArgs {
    #[command(flatten)]
    shape: ShapeArgs,
    #[arg(long)]
    d: i32,
    /// Source scale; 0 measures from the root vertex
    #[arg(long, default_value_t = 1)]
    s: u32,
    #[arg(long = "t-max", default_value_t = 12)]
    t_max: u32,
    #[arg(long, value_enum, default_value_t = Mode::Float)]
    mode: Mode,
    #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
    cap: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(1);
        }
    }
}
