use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "gpctest",
    version,
    about = "Tests for generalized Pareto copulas: simulation, p-value curves, null law"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Replicated tests on simulated copula data.
    Simulate(SimulateArgs),
    /// P-value as a function of c on a single dataset.
    Curve(CurveArgs),
    /// One-shot test on a CSV dataset with empirical margins.
    Test(TestArgs),
    /// Null distribution function and p-values.
    Dist(DistArgs),
    /// Replicated tests on the example process observed on a grid.
    Process(ProcessArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    /// Bivariate family with parameter --lambda; lambda = 0 is a GPC.
    Lemma1,
    Clayton,
    Gumbel,
    /// Equicorrelated normal copula with correlation --rho.
    Normal,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum, default_value = "lemma1")]
    pub family: FamilyName,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub lambda: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub rho: Option<f64>,
    /// Dimension for clayton, gumbel and normal.
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[arg(long, default_value_t = 10_000)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Output path prefix; CSV and SVG files are written next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub run: RunArgs,
    /// Threshold `c` or grid `from:to:steps`.
    #[arg(long, default_value = "0.2")]
    pub c: String,
    #[arg(long, default_value_t = 1000)]
    pub reps: usize,
    /// full (known margins), auto or m=<int> (empirical margins).
    #[arg(long, default_value = "full")]
    pub subset: String,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub run: RunArgs,
    /// Threshold grid; defaults to 60 points from 0.01 to 0.60.
    #[arg(long)]
    pub c: Option<String>,
    /// Use this CSV dataset instead of simulating one.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Defaults to full for simulated data and auto for --input.
    #[arg(long)]
    pub subset: Option<String>,
    /// Also write the simulated dataset to this CSV file.
    #[arg(long)]
    pub save_data: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TestArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value = "0.2")]
    pub c: String,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value = "auto")]
    pub subset: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DistArgs {
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    /// Points at which to evaluate the cdf and p-value.
    #[arg(long, num_args = 1.., required = true, value_delimiter = ',')]
    pub x: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct ProcessArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub lambda: f64,
    #[arg(long, default_value_t = 50)]
    pub grid_d: usize,
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long, default_value = "0.2")]
    pub c: String,
    #[arg(long, default_value_t = 500)]
    pub reps: usize,
    #[arg(long, default_value = "auto")]
    pub subset: String,
}
