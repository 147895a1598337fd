//! `qftlab`: verify Fourier-transform identities, solve hidden homomorphism
//! instances and run the classical/quantum separation experiment.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::commands::{Failure, OperatorName};
use crate::config::{FileConfig, Format};

#[derive(Parser, Debug)]
#[command(name = "qftlab", version, about = "Quantum Fourier transforms over finite abelian groups")]
struct Cli {
    /// JSON config file; flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Residual tolerance.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Largest order for dense operators.
    #[arg(long, global = true)]
    dense_cap: Option<usize>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Character checks and the inversion identity for one target.
    Verify(VerifyArgs),
    /// Recover ψ(a) from a hidden box with one quantum query.
    Solve(SolveArgs),
    /// Classical collision rates against the quantum solver on Z_p.
    Separation(SeparationArgs),
    /// Print the dense matrix of a named operator as JSON.
    DumpOperator(DumpArgs),
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// `Z4xZ2`, `GF(9);f=Z^2+1`, `M2(Z3)` or a JSON group/field spec.
    pub target: Option<String>,
    /// Check this many maps, sampled with the seed, instead of the default.
    #[arg(long)]
    pub maps: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    pub target: Option<String>,
    /// Hidden multiplier `s`.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "random")]
    pub s: Option<String>,
    /// Draw `s` from the seed.
    #[arg(long)]
    pub random: bool,
    /// Query point; defaults to the all-ones element.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Compare the answer against the hidden data.
    #[arg(long)]
    pub audit: bool,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Debug)]
pub struct SeparationArgs {
    /// Prime orders, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub orders: Option<Vec<u64>>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Query budgets m; defaults to 1..=⌈√(2n)⌉.
    #[arg(long, value_delimiter = ',')]
    pub budgets: Option<Vec<u64>>,
    /// Trials per order that also run the quantum solver.
    #[arg(long)]
    pub quantum_trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Include one record per trial (JSON only).
    #[arg(long)]
    pub audit: bool,
}

#[derive(Args, Debug)]
pub struct DumpArgs {
    pub target: String,
    #[arg(value_enum)]
    pub operator: OperatorName,
    /// Shift for `translation`, multiplier for `a-psi`/`b-psi`.
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<String>,
    /// Seed for `permutation`.
    #[arg(long)]
    pub seed: Option<u64>,
}

fn run(cli: Cli) -> Result<commands::Outcome, Failure> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path).map_err(Failure::Usage)?,
        None => FileConfig::default(),
    };
    let env_seed = config::env_seed().map_err(Failure::Usage)?;
    let mut limits = qftlab_core::Limits::default();
    limits.tolerance = config::pick(cli.tolerance, file.tolerance, || limits.tolerance);
    limits.dense_cap = config::pick(cli.dense_cap, file.dense_cap, || limits.dense_cap);
    if !(limits.tolerance >= 0.0) {
        return Err(Failure::Usage(format!("tolerance {} must be non-negative", limits.tolerance)));
    }
    if let Some(workers) = cli.workers.or(file.workers) {
        if workers == 0 {
            return Err(Failure::Usage("--workers must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let ctx = commands::Context {
        file,
        env_seed,
        limits,
    };
    match cli.command {
        Command::Verify(args) => commands::verify(&ctx, args),
        Command::Solve(args) => commands::solve(&ctx, args),
        Command::Separation(args) => commands::separation(&ctx, args),
        Command::DumpOperator(args) => commands::dump_operator(&ctx, args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) => {
            print!("{}", outcome.text);
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Assertion(msg)) => {
            eprintln!("failed: {msg}");
            ExitCode::from(1)
        }
    }
}
