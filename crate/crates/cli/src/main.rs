//! `wscan`: second-order quantifier elimination with witnesses from the command line.
//!
//! Exit codes: 0 solved (and verified, or verification skipped), 1 solved but
//! verification or witness extraction failed, 2 no derivation within limits,
//! 3 input error.

mod bench;
mod commands;
mod pipeline;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use wscan::witness::WitnessMode;

/// Exit status categories.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Ok = 0,
    VerificationFailed = 1,
    NoDerivation = 2,
    InputError = 3,
}

#[derive(Parser, Debug)]
#[command(name = "wscan", version, about = "SCAN-based second-order quantifier elimination with witnesses")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Search for an eliminating derivation and extract a witness.
    Solve(SolveArgs),
    /// Check a witness file against a problem.
    Check(CheckArgs),
    /// Print the problem encoding of a graph-reachability instance.
    EncodeGraph {
        /// Graph file (`nodes`, `edge`, `init`, `fail` lines).
        graph: PathBuf,
    },
    /// Replay a derivation trace, then extract and verify its witness.
    Replay(ReplayArgs),
    /// Solve every problem file in a directory and report metrics.
    Bench(BenchArgs),
    /// Prove a goal formula from premise clauses with the built-in prover.
    Prove(ProveArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
pub enum ModeArg {
    Auto,
    FirstOrder,
    Fixpoint,
    Resolution,
}

impl From<ModeArg> for WitnessMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Auto => WitnessMode::Auto,
            ModeArg::FirstOrder => WitnessMode::FirstOrder,
            ModeArg::Fixpoint => WitnessMode::Fixpoint,
            ModeArg::Resolution => WitnessMode::Resolution,
        }
    }
}

fn parse_seconds(s: &str) -> Result<Duration, String> {
    let secs: f64 = s.trim_end_matches('s').parse().map_err(|_| format!("`{s}` is not a number of seconds"))?;
    if !(secs.is_finite() && secs > 0.0) {
        return Err(format!("`{s}` must be a positive number of seconds"));
    }
    Ok(Duration::from_secs_f64(secs))
}

/// Options shared by every command that extracts and checks witnesses.
#[derive(Args, Debug, Clone)]
pub struct WitnessArgs {
    /// Witness construction for purified clause deletions.
    #[arg(long, value_enum, default_value = "auto")]
    pub witness_mode: ModeArg,
    /// Inference budget for resolution witnesses.
    #[arg(long, default_value_t = 200)]
    pub lres_budget: usize,
    /// Added to the minimal acyclicity bound of first-order witnesses.
    #[arg(long, default_value_t = 0)]
    pub extra_k: usize,
    /// Time budget in seconds (search, and separately verification).
    #[arg(long, env = "WSCAN_TIMEOUT", default_value = "10", value_parser = parse_seconds)]
    pub timeout: Duration,
    /// Output format.
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    pub file: PathBuf,
    /// Print the derivation trace.
    #[arg(long)]
    pub trace: bool,
    /// Check every witness with the prover and the finite-model oracle.
    #[arg(long)]
    pub verify: bool,
    /// Report up to N distinct derivations.
    #[arg(long, default_value_t = 1)]
    pub all: usize,
    /// Maximum number of counted derivation steps.
    #[arg(long, default_value_t = 50)]
    pub max_steps: usize,
    /// Seed for tie-breaking between equally ranked choices.
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub witness: WitnessArgs,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    pub problem: PathBuf,
    /// Witness file with lines `X := lambda u. formula`.
    pub witness: PathBuf,
    /// Conclusion clauses; searched for when omitted.
    #[arg(long)]
    pub conclusion: Option<PathBuf>,
    #[arg(long, default_value_t = 50)]
    pub max_steps: usize,
    #[command(flatten)]
    pub witness_args: WitnessArgs,
}

#[derive(Args, Debug)]
pub struct ReplayArgs {
    pub problem: PathBuf,
    pub trace: PathBuf,
    /// Skip witness verification.
    #[arg(long)]
    pub no_verify: bool,
    #[command(flatten)]
    pub witness: WitnessArgs,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    pub dir: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: BenchFormat,
    /// Number of problems solved in parallel.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Also run verification for each witness.
    #[arg(long)]
    pub verify: bool,
    #[arg(long, default_value_t = 50)]
    pub max_steps: usize,
    #[arg(long, env = "WSCAN_TIMEOUT", default_value = "10", value_parser = parse_seconds)]
    pub timeout: Duration,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
pub enum BenchFormat {
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct ProveArgs {
    /// Premise clauses in the problem file format.
    pub premises: PathBuf,
    /// Goal formula file.
    pub goal: PathBuf,
    #[arg(long, env = "WSCAN_TIMEOUT", default_value = "10", value_parser = parse_seconds)]
    pub timeout: Duration,
    /// Print the refutation.
    #[arg(long)]
    pub proof: bool,
}

/// Exits quietly when stdout is closed early (e.g. piped into `head`) instead
/// of reporting the failed `print!` as a crash.
fn exit_quietly_on_broken_pipe() {
    let default = std::panic::take_hook();
    std::panic::set_hook(Box::new(move |info| {
        let message = info
            .payload()
            .downcast_ref::<String>()
            .map(String::as_str)
            .or_else(|| info.payload().downcast_ref::<&str>().copied())
            .unwrap_or("");
        if message.contains("Broken pipe") {
            std::process::exit(0);
        }
        default(info);
    }));
}

fn main() -> ExitCode {
    exit_quietly_on_broken_pipe();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(a) => commands::solve(&a),
        Command::Check(a) => commands::check(&a),
        Command::EncodeGraph { graph } => commands::encode_graph(&graph),
        Command::Replay(a) => commands::replay(&a),
        Command::Bench(a) => bench::run(&a),
        Command::Prove(a) => commands::prove(&a),
    };
    match result {
        Ok(outcome) => ExitCode::from(outcome as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(Outcome::InputError as u8)
        }
    }
}
