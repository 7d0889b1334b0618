//! Command-line surface of the symmetric-state activation toolkit.
//!
//! Subcommands map onto the library modules: `extremes`, `classify` and
//! `regions` expose the exact coordinate geometry, `activate` and `plane`
//! the filtering protocol, `witness` and `distill-check` the
//! certification routines, and `verify` the built-in oracle suite.
//!
//! Exit codes: 0 success, 1 invalid input or configuration, 2 numerical
//! failure, 3 verification-suite failure.

mod commands;
mod render;

use clap::error::ErrorKind;
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use symact_core::tol;
use symact_core::Error;

#[derive(Parser)]
#[command(
    name = "symact",
    version,
    about = "Exact geometry, activation protocol and distillability checks \
             for the four-party symmetric state family"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Region label, witness value and activating interval of a coordinate point
    Classify(ClassifyArgs),
    /// Evaluate the filtering protocol on a Werner pair and a symmetric state
    Activate(ActivateArgs),
    /// Exact extreme points and intersection vertices of the polytopes
    Extremes(ExtremesArgs),
    /// Threshold hyperplane at a fixed alpha and its ridge crossing
    Plane(PlaneArgs),
    /// Grid scan of the coordinate simplex, one labeled row per point
    Regions(RegionsArgs),
    /// Witness expectation and the empirical product-state floor
    Witness(WitnessArgs),
    /// Schmidt-rank-two minimization and the distillability verdict
    DistillCheck(DistillCheckArgs),
    /// Run the oracle suite for one dimension
    Verify(VerifyArgs),
}

#[derive(Args)]
pub struct OutputArgs {
    /// Write the result here instead of stdout
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Args)]
pub struct ClassifyArgs {
    /// Local dimension of each subsystem (region labels need d >= 3)
    #[arg(long)]
    d: usize,
    /// First three coordinates, rationals ("1/6") or decimals; the fourth is derived
    #[arg(long, num_args = 3, value_names = ["L1", "L2", "L3"], required = true)]
    lambda: Vec<String>,
    /// Werner parameter; adds the activation report for this alpha
    #[arg(long)]
    alpha: Option<String>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
#[command(group = ArgGroup::new("source").required(true))]
pub struct ActivateArgs {
    /// Local dimension of each subsystem
    #[arg(long)]
    d: usize,
    /// Werner parameter, strictly between -d and d
    #[arg(long)]
    alpha: String,
    /// Coordinates of the symmetric state fed to the filter
    #[arg(long, num_args = 3, value_names = ["L1", "L2", "L3"], group = "source")]
    lambda: Option<Vec<String>>,
    /// Four-party operator JSON file used instead of --lambda
    #[arg(long, value_name = "FILE", group = "source")]
    sigma: Option<PathBuf>,
    /// Cross-check the closed form against the dense protocol (runs when d <= 3)
    #[arg(long)]
    verify: bool,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
pub struct ExtremesArgs {
    /// Local dimension of each subsystem
    #[arg(long)]
    d: usize,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
pub struct PlaneArgs {
    /// Local dimension of each subsystem
    #[arg(long)]
    d: usize,
    /// Werner parameter, strictly between 1 and d
    #[arg(long)]
    alpha: String,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
pub struct RegionsArgs {
    /// Local dimension of each subsystem (at least 3)
    #[arg(long)]
    d: usize,
    /// Grid resolution N: rows are lambda_i = k_i/N with k1 + k2 + k3 <= N.
    /// Rows are computed in parallel; RAYON_NUM_THREADS bounds the workers.
    #[arg(long)]
    resolution: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
#[command(group = ArgGroup::new("source").required(true))]
pub struct WitnessArgs {
    /// Local dimension of each subsystem
    #[arg(long)]
    d: usize,
    /// Coordinates of the symmetric state to evaluate
    #[arg(long, num_args = 3, value_names = ["L1", "L2", "L3"], group = "source")]
    lambda: Option<Vec<String>>,
    /// Four-party operator JSON file used instead of --lambda
    #[arg(long, value_name = "FILE", group = "source")]
    state: Option<PathBuf>,
    /// Product states sampled for the positivity floor
    #[arg(long, default_value_t = 20_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
#[command(group = ArgGroup::new("source").required(true))]
pub struct DistillCheckArgs {
    /// Werner state: dimension and alpha
    #[arg(long, num_args = 2, value_names = ["D", "ALPHA"], group = "source")]
    werner: Option<Vec<String>>,
    /// Isotropic state: dimension and maximally entangled fraction
    #[arg(long, num_args = 2, value_names = ["D", "F"], group = "source")]
    isotropic: Option<Vec<String>>,
    /// Bipartite operator JSON file used instead of a named family
    #[arg(long, value_name = "FILE", group = "source")]
    state: Option<PathBuf>,
    /// Comma-separated labels of the untransposed side for a state file
    /// (default: the first subsystem alone)
    #[arg(long, value_name = "LABELS", requires = "state")]
    cut: Option<String>,
    /// Seeded restarts of the rank-two search
    #[arg(long, default_value_t = tol::RANK2_DEFAULT_RESTARTS)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
pub struct VerifyArgs {
    /// Local dimension of each subsystem
    #[arg(long)]
    d: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = VerifyFormat::Text)]
    format: VerifyFormat,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum VerifyFormat {
    Text,
    Json,
}

/// A failed run, already sorted by exit code: bad input (1) or a
/// numerical breakdown (2).
pub enum Failure {
    Input(String),
    Numerical(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Input(_) => 1,
            Failure::Numerical(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Numerical(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match &e {
            Error::DegenerateFilter(_) | Error::Numerical(_) | Error::NoConvergence(_) => {
                Failure::Numerical(e.to_string())
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

/// Prints to stdout or writes to --output, then reports the exit code
/// (nonzero only for `verify` on a failed suite).
pub fn emit(out: &OutputArgs, text: &str) -> Result<(), Failure> {
    match &out.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            let _ = e.print();
            return 1;
        }
    };
    let result = match &cli.command {
        Command::Classify(args) => commands::classify(args),
        Command::Activate(args) => commands::activate(args),
        Command::Extremes(args) => commands::extremes(args),
        Command::Plane(args) => commands::plane(args),
        Command::Regions(args) => commands::regions(args),
        Command::Witness(args) => commands::witness(args),
        Command::DistillCheck(args) => commands::distill_check(args),
        Command::Verify(args) => commands::verify(args),
    };
    match result {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            failure.code()
        }
    }
}
