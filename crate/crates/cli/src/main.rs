//! `ncgap`: build network-coding gap instances, verify them, and bound their
//! packing number.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error,
//! 3 resource guard.

mod commands;
mod config;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "ncgap", version, about = "Network-coding gap instances from locally decodable codes")]
#[command(args_override_self = true)]
struct Cli {
    /// Worker threads (0 = one per core). Outputs do not depend on this.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Key-value file of default flags; command-line flags win.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a gap instance; writes PREFIX.json and PREFIX.dot and prints a JSON report.
    Build(BuildArgs),
    /// Check the gap-instance conditions of an instance file.
    Verify(VerifyArgs),
    /// Gap lower bound, dual certificate, packing number and sparsity of an instance file.
    Bound(BoundArgs),
    /// Convert a code into a robust-distance family.
    Rdldc(RdldcArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    Hadamard,
    Mv,
    Mock,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Alg {
    Sampling,
    Tree,
    Rd,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CodeArgs {
    #[arg(long, value_enum)]
    pub code: Backend,
    /// Message length (for mv, the number of matching-vector pairs).
    #[arg(long)]
    pub k: usize,
    /// Codeword length of a mock code.
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n: Option<usize>,
    /// Queries of a mock code.
    #[arg(long)]
    pub q: Option<usize>,
    /// Decoding radius, as a fraction or decimal.
    #[arg(long, default_value = "1/8")]
    pub delta: String,
    /// Modulus of a matching-vector family.
    #[arg(long, default_value_t = 3)]
    pub m: u64,
    /// Dimension for a searched matching-vector family; without it the trivial family is used.
    #[arg(long)]
    pub h: Option<usize>,
    /// Residues `S` for a searched family (default: the canonical set of `m`).
    #[arg(long, value_delimiter = ',')]
    pub s: Vec<u64>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct BuildArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub code: CodeArgs,
    #[arg(long, value_enum, default_value = "tree")]
    pub alg: Alg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Robust-distance family (required for `--alg rd`).
    #[arg(long, value_name = "FILE")]
    pub family: Option<PathBuf>,
    /// Distance parameter for `--alg rd` (default: log k / (2 (log q + log log k))).
    #[arg(long)]
    pub distance: Option<f64>,
    /// Output prefix.
    #[arg(long, default_value = "instance")]
    pub out: PathBuf,
    /// Simulate a coding solution only up to this many vertices.
    #[arg(long, default_value_t = 200_000)]
    pub solve_limit: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct VerifyArgs {
    pub instance: PathBuf,
    #[arg(long, default_value_t = 200_000)]
    pub solve_limit: usize,
    /// Simulate every message when `|F|^k` is at most this.
    #[arg(long, default_value_t = 1 << 16)]
    pub exhaustive_limit: u64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct BoundArgs {
    pub instance: PathBuf,
    /// Exact simplex over enumerated trees (default).
    #[arg(long, conflicts_with = "approx")]
    pub exact: bool,
    /// Certified multiplicative-weights interval.
    #[arg(long)]
    pub approx: bool,
    #[arg(long, default_value_t = ncgap::packing::DEFAULT_EPSILON)]
    pub epsilon: f64,
    /// Largest number of enumerated trees for --exact.
    #[arg(long, default_value_t = ncgap::packing::DEFAULT_TREE_LIMIT)]
    pub tree_limit: usize,
    #[arg(long, default_value_t = 200_000)]
    pub solve_limit: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct RdldcArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub code: CodeArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 64)]
    pub retries: usize,
    /// Where to write the family JSON.
    #[arg(long, default_value = "family.json")]
    pub out: PathBuf,
}

/// Error carrying its exit code.
#[derive(Debug)]
pub struct Exit {
    pub code: u8,
    pub message: String,
}

impl fmt::Display for Exit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for Exit {}

pub fn usage(message: impl Into<String>) -> anyhow::Error {
    Exit { code: 2, message: message.into() }.into()
}

pub fn guard(message: impl Into<String>) -> anyhow::Error {
    Exit { code: 3, message: message.into() }.into()
}

fn exit_code(err: &anyhow::Error) -> u8 {
    use ncgap::codes::CodeError;
    use ncgap::instance::InstanceError;
    use ncgap::packing::PackingError;
    use ncgap::steiner::SteinerError;
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<Exit>() {
            return e.code;
        }
        if cause.is::<serde_json::Error>() || cause.is::<std::io::Error>() {
            return 2;
        }
        let guarded = matches!(cause.downcast_ref::<InstanceError>(), Some(InstanceError::TooLarge(_)))
            || matches!(cause.downcast_ref::<PackingError>(), Some(PackingError::TooLarge(_)))
            || matches!(
                cause.downcast_ref::<SteinerError>(),
                Some(
                    SteinerError::TooManyTrees(_) | SteinerError::SearchBudget(_) | SteinerError::TooManyTerminals(..)
                )
            )
            || matches!(
                cause.downcast_ref::<CodeError>(),
                Some(CodeError::MessageTooLong(..) | CodeError::RandomnessTooLarge(..))
            );
        if guarded {
            return 3;
        }
    }
    2
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global()?;
    }
    match cli.command {
        Command::Build(a) => commands::build(&a),
        Command::Verify(a) => commands::verify(&a),
        Command::Bound(a) => commands::bound(&a),
        Command::Rdldc(a) => commands::rdldc(&a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let argv = match config::expand(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    // clap reports usage errors itself with exit code 2.
    let cli = Cli::parse_from(argv);
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
