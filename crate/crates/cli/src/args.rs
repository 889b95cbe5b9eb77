use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use noisy_lis_core::{DMode, PermutationKind, SorterId};

#[derive(Debug, Parser)]
#[command(
    name = "noisy-lis",
    version,
    about = "Approximate longest increasing subsequences under persistent comparison errors"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a permutation.
    Gen(GenArgs),
    /// Run the pipeline once and print a trial record.
    Run(RunArgs),
    /// Run every (n, p, sorter, d) cell over a range of seeds.
    Sweep(SweepArgs),
    /// Failure rate of the approximate LIS on the adversarial family.
    Lowerbound(LowerboundArgs),
    /// Dislocation of a sorter across input sizes.
    DislCurve(CurveArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Base seed. A random one is drawn and printed when omitted.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct SorterArgs {
    #[arg(long, default_value = "windowed-refine", value_parser = parse_sorter)]
    pub sorter: SorterId,
    /// Window width for windowed-refine (default 4⌈log₂ n⌉).
    #[arg(long)]
    pub window: Option<usize>,
    /// Refinement passes for windowed-refine.
    #[arg(long)]
    pub passes: Option<usize>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub n: usize,
    /// uniform, identity, reversed or planted-lis:<l>.
    #[arg(long, default_value = "uniform", value_parser = parse_kind)]
    pub kind: PermutationKind,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub p: f64,
    #[arg(long, default_value = "uniform", value_parser = parse_kind)]
    pub kind: PermutationKind,
    #[command(flatten)]
    pub sorter: SorterArgs,
    /// auto:c=<float>, fixed:<int> or measured.
    #[arg(long, default_value = "auto:c=4", value_parser = parse_d)]
    pub d: DMode,
    /// Largest n for which the exact LIS is computed.
    #[arg(long, default_value_t = noisy_lis_core::ORACLE_CAP)]
    pub oracle_cap: usize,
    /// Write per-phase wall times here as JSON.
    #[arg(long)]
    pub timings: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Comma-separated sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    /// Comma-separated error rates.
    #[arg(long, value_delimiter = ',', required = true)]
    pub p: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "windowed-refine", value_parser = parse_sorter)]
    pub sorter: Vec<SorterId>,
    #[arg(long)]
    pub window: Option<usize>,
    #[arg(long)]
    pub passes: Option<usize>,
    #[arg(long, value_delimiter = ',', default_value = "auto:c=4", value_parser = parse_d)]
    pub d: Vec<DMode>,
    /// Seeds per cell: base seed, base + 1, ...
    #[arg(long, default_value_t = 30)]
    pub trials: u64,
    #[arg(long, default_value = "uniform", value_parser = parse_kind)]
    pub kind: PermutationKind,
    #[arg(long, default_value_t = noisy_lis_core::ORACLE_CAP)]
    pub oracle_cap: usize,
    /// Also write the JSON summary here.
    #[arg(long)]
    pub summary: Option<PathBuf>,
    /// Write per-phase wall times here as CSV.
    #[arg(long)]
    pub timings: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct LowerboundArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub p: f64,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[command(flatten)]
    pub sorter: SorterArgs,
    /// auto:c=<float> or fixed:<int>.
    #[arg(long, default_value = "auto:c=4", value_parser = parse_d)]
    pub d: DMode,
    /// Success needs length ≥ η / (c · log₂ n) for this c.
    #[arg(long, default_value_t = 1.0)]
    pub success_c: f64,
    /// Drop the length condition from the success test.
    #[arg(long)]
    pub no_length_check: bool,
    /// Drop the "two of the first η" condition from the success test.
    #[arg(long)]
    pub no_head_pair: bool,
    /// Also write the JSON summary here.
    #[arg(long)]
    pub summary: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "256,512,1024,2048,4096,8192,16384"
    )]
    pub n: Vec<usize>,
    #[arg(long)]
    pub p: f64,
    #[command(flatten)]
    pub sorter: SorterArgs,
    /// Seeds per size: base seed, base + 1, ...
    #[arg(long, default_value_t = 30)]
    pub trials: u64,
    #[command(flatten)]
    pub common: Common,
}

fn parse_sorter(s: &str) -> Result<SorterId, String> {
    s.parse().map_err(|e: noisy_lis_core::Error| e.to_string())
}

fn parse_kind(s: &str) -> Result<PermutationKind, String> {
    s.parse().map_err(|e: noisy_lis_core::Error| e.to_string())
}

fn parse_d(s: &str) -> Result<DMode, String> {
    s.parse().map_err(|e: noisy_lis_core::Error| e.to_string())
}
