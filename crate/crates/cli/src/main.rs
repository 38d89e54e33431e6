//! `uape`: generate synthetic corpora, run cascades, and score predictions.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod evaluate;
mod files;
mod generate;
mod simulate;

/// Exit status for bad command-line usage.
const EXIT_USAGE: u8 = 1;
/// Exit status for unreadable, malformed, or inconsistent data.
const EXIT_DATA: u8 = 2;
/// Exit status for internal assertion failures.
const EXIT_INTERNAL: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "uape",
    version,
    about = "Topic-aware attitude dissemination simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a synthetic corpus: edge list, attitude table, seed file, manifest.
    Generate(GenerateArgs),
    /// Run a cascade and write its trace, curves, scores, and manifest.
    Simulate(SimulateArgs),
    /// Score predictions against ground-truth activation labels (ROC-AUC).
    Evaluate(EvaluateArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Take node/edge/topic/seed counts from a reference corpus shape (I..VI or 1..6).
    #[arg(long)]
    preset: Option<String>,
    /// Number of nodes.
    #[arg(long, required_unless_present = "preset")]
    nodes: Option<usize>,
    /// Number of distinct directed edges.
    #[arg(long, required_unless_present = "preset")]
    edges: Option<usize>,
    /// Number of topics.
    #[arg(long, required_unless_present = "preset")]
    topics: Option<usize>,
    /// Seed nodes per topic.
    #[arg(long, required_unless_present = "preset")]
    seeds: Option<usize>,
    /// Weight written on every generated edge.
    #[arg(long, default_value_t = 1.0)]
    edge_probability: f64,
    /// Seed of the generator's random stream.
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
    /// Directory receiving edges.csv, attitudes.csv, seeds.csv, manifest.txt.
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Replay a previous run from its manifest instead of the input flags.
    #[arg(long, conflicts_with_all = [
        "graph", "attitudes", "seeds", "config", "topics", "model",
        "probability", "rounds", "topic", "rng_seed", "monte_carlo",
    ])]
    manifest: Option<PathBuf>,
    /// Edge list (`source,target[,weight]`).
    #[arg(long, required_unless_present = "manifest")]
    graph: Option<PathBuf>,
    /// Attitude table (`node,topic,attitude`).
    #[arg(long, required_unless_present = "manifest")]
    attitudes: Option<PathBuf>,
    /// Seed file (`node[,topic[,persistence]]`).
    #[arg(long)]
    seeds: Option<PathBuf>,
    /// Config file of `key = value` lines; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Topic count; inferred from the attitude table when absent.
    #[arg(long)]
    topics: Option<usize>,
    /// Cascade model: uape or ic.
    #[arg(long)]
    model: Option<String>,
    /// IC activation probability applied to every edge.
    #[arg(long = "p")]
    probability: Option<f64>,
    /// Number of rounds.
    #[arg(long)]
    rounds: Option<usize>,
    /// Topic index to cascade, or `all`.
    #[arg(long)]
    topic: Option<String>,
    /// Seed of all run randomness.
    #[arg(long)]
    rng_seed: Option<u64>,
    /// Monte Carlo replicas used for scores.csv.
    #[arg(long = "monte-carlo")]
    monte_carlo: Option<usize>,
    /// Worker threads for Monte Carlo replicas.
    #[arg(long)]
    jobs: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Ground truth (`node,topic,label`, label 0 or 1).
    #[arg(long)]
    truth: PathBuf,
    /// Optional truth curve (`round,topic,positive,neutral,negative,unknown`).
    #[arg(long)]
    truth_curve: Option<PathBuf>,
    /// Prediction scores (`node,topic,score`).
    #[arg(long, conflicts_with_all = ["trace", "config"])]
    scores: Option<PathBuf>,
    /// Prediction trace; scored by final activation. Needs --graph and --attitudes.
    #[arg(long, requires_all = ["graph", "attitudes"], conflicts_with = "config")]
    trace: Option<PathBuf>,
    /// Run the model(s) from this config and score them. Needs --graph and --attitudes.
    #[arg(long, requires_all = ["graph", "attitudes"])]
    config: Option<PathBuf>,
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long)]
    attitudes: Option<PathBuf>,
    /// Topic count; inferred from the attitude table when absent.
    #[arg(long)]
    topics: Option<usize>,
    /// Comma-separated models to run with --config.
    #[arg(long, default_value = "uape")]
    models: String,
    /// Worker threads for Monte Carlo replicas.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Report path; with several models each report goes to `<out>.<model>`.
    /// Prints to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure classified by exit status.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Core(uape_core::Error),
}

impl From<uape_core::Error> for Failure {
    fn from(e: uape_core::Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Core(e.into())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Generate(args) => generate::run(args),
        Command::Simulate(args) => simulate::run(args),
        Command::Evaluate(args) => evaluate::run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            if e.is_internal() {
                ExitCode::from(EXIT_INTERNAL)
            } else {
                ExitCode::from(EXIT_DATA)
            }
        }
    }
}
