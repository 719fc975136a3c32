use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use limbadd::bench::{Algorithm, DEFAULT_REPETITIONS, STANDARD_SIZES};

#[derive(Debug, Parser)]
#[command(
    name = "limbadd",
    version,
    about = "Big-integer addition over 18-digit limbs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Add two operands read from files or standard input
    Add(AddArgs),
    /// Cross-check the adders on random operands
    Verify(VerifyArgs),
    /// Print a random operand or the worst-case carry pair
    Gen(GenArgs),
    /// Time the adders and write a CSV report
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgoArg {
    Seq,
    Par,
    Oracle,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Algorithm {
        match a {
            AlgoArg::Seq => Algorithm::Sequential,
            AlgoArg::Par => Algorithm::Parallel,
            AlgoArg::Oracle => Algorithm::Oracle,
        }
    }
}

#[derive(Debug, Args)]
pub struct AddArgs {
    /// First operand: a file path, or `-` for standard input
    #[arg(long = "a", value_name = "PATH")]
    pub a: String,
    /// Second operand: a file path, or `-` for standard input
    #[arg(long = "b", value_name = "PATH")]
    pub b: String,
    #[arg(long, value_enum, default_value = "seq")]
    pub algo: AlgoArg,
    /// Worker threads for `--algo par` [default: hardware parallelism]
    #[arg(long)]
    pub workers: Option<usize>,
    /// Where to write the sum
    #[arg(long, default_value = "-", value_name = "PATH")]
    pub out: String,
    /// Append a CSV metrics row to this file
    #[arg(long, value_name = "PATH")]
    pub metrics: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 500)]
    pub max_digits: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Parallel widths to check against the sequential adder
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,8")]
    pub workers_list: Vec<usize>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub digits: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Print `digits` nines and `1` on two lines
    #[arg(long)]
    pub worst_case: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_values_t = STANDARD_SIZES)]
    pub sizes: Vec<usize>,
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_value = "seq,par,oracle"
    )]
    pub algos: Vec<AlgoArg>,
    /// Worker counts for the parallel adder
    #[arg(long, value_delimiter = ',', default_value = "4")]
    pub workers: Vec<usize>,
    #[arg(long, default_value_t = DEFAULT_REPETITIONS)]
    pub reps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "-", value_name = "PATH")]
    pub out: String,
}
