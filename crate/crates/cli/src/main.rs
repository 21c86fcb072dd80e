//! `steiner-balance`: constructions, metrics, bounds, searches and load
//! simulation for labeled partial Steiner systems.

mod commands;
mod manifest;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "steiner-balance", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a design: sum-class, fourpack, sw-special, sw-general, bose,
    /// skolem or catalog:<name>.
    Construct(ConstructArgs),
    /// Sum metrics of a labeled design.
    Metrics {
        design: PathBuf,
        #[arg(long)]
        labeling: Option<PathBuf>,
    },
    /// Closed-form bounds for an S(t,k,v).
    Bounds { t: u32, k: u32, v: u32 },
    /// Independent sets and the bounds they imply.
    Independence(IndependenceArgs),
    /// Find a labeling.
    Label(LabelArgs),
    /// Search for triple systems matching the reference table; CSV output.
    Table(TableArgs),
    /// Per-node access load under a popularity profile.
    Simulate(SimulateArgs),
    /// Check a design and labeling against every applicable bound.
    Verify {
        design: PathBuf,
        #[arg(long)]
        labeling: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    pub name: String,
    /// Order of the design (not used by catalog entries).
    pub v: Option<u32>,
    /// Strength for sum-class packings.
    #[arg(long, default_value_t = 2)]
    pub t: u32,
    /// Signed sum class for sum-class packings.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "class")]
    pub sigma: Option<i64>,
    /// Raw sum class in 0..v for sum-class packings.
    #[arg(long)]
    pub class: Option<u32>,
    /// Write the design file here and print a JSON summary; without it the
    /// design file goes to standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the construction's labeling.
    #[arg(long)]
    pub labeling_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[group(id = "mode", multiple = false)]
pub struct IndependenceMode {
    #[arg(long)]
    pub exact: bool,
    #[arg(long)]
    pub greedy: bool,
    #[arg(long)]
    pub pair: bool,
}

#[derive(Args, Debug)]
pub struct IndependenceArgs {
    pub design: PathBuf,
    #[command(flatten)]
    pub mode: IndependenceMode,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct LabelArgs {
    pub design: PathBuf,
    /// Labeling built from an independent pair.
    #[arg(long, conflicts_with_all = ["exact", "anneal"])]
    pub from_pair: bool,
    #[arg(long, default_value = "min-diffsum")]
    pub objective: String,
    /// Exhaustive for v <= 9, branch and bound above.
    #[arg(long, conflicts_with = "anneal")]
    pub exact: bool,
    /// Simulated annealing (the default).
    #[arg(long)]
    pub anneal: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Annealing steps.
    #[arg(long, default_value_t = 200_000)]
    pub budget: u64,
    /// Branch-and-bound nodes per window.
    #[arg(long)]
    pub node_budget: Option<u64>,
    /// Write the labeling file here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    /// Inclusive range of orders, `a..b`.
    #[arg(long, default_value = "7..27")]
    pub v_range: String,
    #[arg(long, default_value_t = 10_000_000)]
    pub budget: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Print JSON with the manifest and the found designs instead of CSV.
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    pub design: PathBuf,
    pub labeling: PathBuf,
    /// `uniform`, `linear`, `zipf:<s>` or a profile JSON file.
    #[arg(long)]
    pub profile: String,
    /// Also compute the FRC rate for this many nodes read.
    #[arg(long)]
    pub frc_rate: Option<u32>,
    /// Print the per-node loads as CSV instead of JSON.
    #[arg(long)]
    pub csv: bool,
}

/// Error reported on standard error as one JSON line.
#[derive(Debug, Serialize)]
pub struct CliError {
    pub kind: String,
    pub message: String,
}

impl CliError {
    pub fn new(kind: &str, message: impl Into<String>) -> Self {
        CliError {
            kind: kind.to_string(),
            message: message.into(),
        }
    }
}

impl From<steiner_core::Error> for CliError {
    fn from(e: steiner_core::Error) -> Self {
        CliError::new(e.kind(), e.to_string())
    }
}

/// Exit status 0 means every requested check passed.
pub enum Outcome {
    Pass,
    Fail,
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(s) = std::env::var("STEINER_BALANCE_THREADS") else {
        return Ok(());
    };
    let n: usize = s
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::new("usage", format!("STEINER_BALANCE_THREADS must be a positive integer, got {s:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::new("threads", e.to_string()))
}

fn report_error(e: &CliError) {
    #[derive(Serialize)]
    struct Wrapper<'a> {
        error: &'a CliError,
    }
    eprintln!("{}", serde_json::to_string(&Wrapper { error: e }).expect("serializable"));
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ");
            report_error(&CliError::new("usage", first));
            return ExitCode::from(2);
        }
    };
    let run = configure_threads().and_then(|_| commands::run(cli.command, args));
    match run {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            report_error(&e);
            ExitCode::from(2)
        }
    }
}
