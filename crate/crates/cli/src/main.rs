//! `plausets`: exact confidence regions from plausibility functions.

mod commands;
mod source;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "plausets", version, about = "Exact confidence regions from plausibility functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tabulate pl(theta) on a grid and report the alpha-crossings.
    PlCurve(CurveArgs),
    /// Print the confidence interval as one CSV line `lo,hi,alpha`.
    Interval(IntervalArgs),
    /// Grid level set of a two-parameter plausibility function.
    Region2d(RegionArgs),
    /// Estimate the coverage probability of a region by simulation.
    Coverage(CoverageArgs),
    /// Kolmogorov check that pl at the truth is uniform (or larger).
    Validity(ValidityArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModelId {
    Powerlaw,
    Expreg,
    Lognormal,
    Locscale,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Base {
    Normal,
    Logistic,
}

/// Model choice plus either a data file, a known statistic, or a synthetic
/// specification simulated from `--seed`.
#[derive(Args, Debug, Clone)]
pub struct ModelArgs {
    #[arg(long, value_enum)]
    pub model: ModelId,
    /// CSV dataset: `time` (powerlaw), `x,y` (expreg) or `y` (lognormal, locscale).
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Sample size.
    #[arg(long)]
    pub n: Option<usize>,
    /// Observed statistic (powerlaw: sum of log time ratios; expreg: MLE).
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Power-law scale used for simulation.
    #[arg(long, default_value_t = 1.0)]
    pub psi: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub sigma2: Option<f64>,
    /// Location-scale scale parameter.
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Covariates: comma list `0.5,1,2` or integer range `1:10`. Defaults to 1..n.
    #[arg(long, allow_hyphen_values = true)]
    pub xspec: Option<String>,
    /// Location-scale base distribution.
    #[arg(long, value_enum, default_value_t = Base::Normal)]
    pub base: Base,
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, env = "PLAUSETS_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Monte Carlo size (expreg pivot draws).
    #[arg(long, default_value_t = 10_000)]
    pub mc_size: usize,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads; 0 lets the runtime decide.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
}

#[derive(Args, Debug)]
pub struct CurveArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub common: CommonArgs,
    /// Theta grid `lo:hi:steps`; bracketed automatically when absent.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// expreg: re-simulate at every theta instead of using the pivot table.
    #[arg(long)]
    pub per_theta: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum IntervalMethod {
    Plausibility,
    FixedS,
    Wald,
}

#[derive(Args, Debug)]
pub struct IntervalArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_enum, default_value_t = IntervalMethod::Plausibility)]
    pub method: IntervalMethod,
}

#[derive(Args, Debug)]
pub struct RegionArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub common: CommonArgs,
    /// First-axis grid `lo:hi:steps` (mu).
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Second-axis grid `lo:hi:steps` (sigma2 or sigma).
    #[arg(long)]
    pub grid_y: Option<String>,
    /// Cells per axis when the bounds are chosen automatically.
    #[arg(long, default_value_t = 200)]
    pub resolution: usize,
    /// Write the mask even if the level set reaches the grid edge.
    #[arg(long)]
    pub allow_clipped: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum CoverageMethod {
    Plausibility,
    Wald,
    MleEllipse,
    NaiveRect,
    FixedS,
    Whole,
}

#[derive(Args, Debug)]
pub struct CoverageArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_enum, default_value_t = CoverageMethod::Plausibility)]
    pub method: CoverageMethod,
    #[arg(long, default_value_t = 1000)]
    pub reps: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SetChoice {
    /// The model's default or box random set.
    Shipped,
    /// The squared (invalid) contour, for checking the diagnostic.
    Shrunken,
}

#[derive(Args, Debug)]
pub struct ValidityArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value_t = 100_000)]
    pub draws: usize,
    #[arg(long = "set", value_enum, default_value_t = SetChoice::Shipped)]
    pub set: SetChoice,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::PlCurve(a) => commands::pl_curve(&a),
        Command::Interval(a) => commands::interval(&a),
        Command::Region2d(a) => commands::region2d(&a),
        Command::Coverage(a) => commands::coverage(&a),
        Command::Validity(a) => commands::validity(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        // A closed downstream pipe (e.g. `| head`) is not a failure.
        Err(plausets_core::Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_convergence() { 3 } else { 2 })
        }
    }
}
