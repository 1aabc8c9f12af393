mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use symcc::approx::Precision;
use symcc::verify::Budget;

/// Bounds on the quantum communication complexity of symmetric predicates.
#[derive(Parser, Debug)]
#[command(name = "symcc", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Jump profile, reductions, lower-bound chains and upper-bound shape for D on {0..n}
    Bound(BoundArgs),
    /// Johnson scheme eigenvalue table for (n, k)
    Eig(EigArgs),
    /// Approximate degree of D with its best polynomial
    Degree(DegreeArgs),
    /// phi^eps of D restricted to {0..k/2} against the (n, k) trace vectors
    Phi(PhiArgs),
    /// Simulate a seeded random protocol and check its trace-norm bound
    Simulate(SimulateArgs),
    /// Run the oracle cross-check suite
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct Output {
    /// Write to this file instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Debug)]
pub struct PrecisionArgs {
    /// Solve every LP in exact rational arithmetic
    #[arg(long, conflicts_with = "float")]
    pub exact: bool,
    /// Solve every LP in floating point
    #[arg(long)]
    pub float: bool,
}

impl PrecisionArgs {
    pub fn mode(&self) -> Precision {
        match (self.exact, self.float) {
            (true, _) => Precision::Exact,
            (_, true) => Precision::Float,
            _ => Precision::Auto,
        }
    }
}

#[derive(Args, Debug)]
pub struct PredicateArgs {
    /// Predicate: a bitstring D(0)..D(n), or disj, parity, thr:L, eq:L
    #[arg(long = "pred")]
    pub pred: String,
    /// Grid size n (required unless --pred is a bitstring)
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Args, Debug)]
pub struct BoundArgs {
    #[command(flatten)]
    pub predicate: PredicateArgs,
    #[arg(long, default_value_t = 0.25)]
    pub eps: f64,
    #[command(flatten)]
    pub precision: PrecisionArgs,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct EigArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    /// Divide by N C(k,s) C(n-k,k-s)
    #[arg(long)]
    pub normalized: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct DegreeArgs {
    #[command(flatten)]
    pub predicate: PredicateArgs,
    #[command(flatten)]
    pub precision: PrecisionArgs,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct PhiArgs {
    #[command(flatten)]
    pub predicate: PredicateArgs,
    #[arg(long)]
    pub k: usize,
    /// Also run the lower-bound chain for a jump of D at l
    #[arg(long)]
    pub l: Option<usize>,
    #[arg(long, default_value_t = 0.25)]
    pub eps: f64,
    #[command(flatten)]
    pub precision: PrecisionArgs,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Weights {
    Uniform,
    Random,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Register sizes as INPUTS,WORK,ENTANGLED
    #[arg(long, default_value = "4,1,2")]
    pub dims: String,
    /// Number of communicated qubits
    #[arg(long, default_value_t = 2)]
    pub c: usize,
    /// Entanglement weights
    #[arg(long, value_enum, default_value_t = Weights::Uniform)]
    pub weights: Weights,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BudgetArg {
    Small,
    Full,
}

impl From<BudgetArg> for Budget {
    fn from(b: BudgetArg) -> Self {
        match b {
            BudgetArg::Small => Budget::Small,
            BudgetArg::Full => Budget::Full,
        }
    }
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = BudgetArg::Small)]
    pub budget: BudgetArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::dispatch(&cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
