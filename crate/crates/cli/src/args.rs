use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(
    name = "lqlab",
    version,
    about = "Simulate and bound L^q empirical processes of sub-Gaussian linear classes",
    args_override_self = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Command {
    /// Monte Carlo sup-deviation trials for one (set, q, N).
    #[command(args_override_self = true)]
    Simulate(SimulateArgs),
    /// Evaluate the closed-form bound.
    #[command(args_override_self = true)]
    Bound(BoundArgs),
    /// Fit the N-exponent of the median sup deviation.
    #[command(args_override_self = true)]
    Scaling(ScalingArgs),
    /// Certify the two-sided L^q ratio window on a cone.
    #[command(args_override_self = true)]
    Rip(RipArgs),
    /// Diameters of random sections through the duality identity.
    #[command(args_override_self = true)]
    Sections(SectionsArgs),
    /// Admissible sequence and chain diagnostics of a net.
    #[command(args_override_self = true)]
    Diag(DiagArgs),
    /// Calibrate the bound constant against simulated quantiles.
    #[command(args_override_self = true)]
    Calibrate(CalibrateArgs),
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Simulate(a) => &a.common,
            Command::Bound(a) => &a.common,
            Command::Scaling(a) => &a.common,
            Command::Rip(a) => &a.common,
            Command::Sections(a) => &a.common,
            Command::Diag(a) => &a.common,
            Command::Calibrate(a) => &a.common,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Command::Simulate(_) => "simulate",
            Command::Bound(_) => "bound",
            Command::Scaling(_) => "scaling",
            Command::Rip(_) => "rip",
            Command::Sections(_) => "sections",
            Command::Diag(_) => "diag",
            Command::Calibrate(_) => "calibrate",
        }
    }
}

#[derive(Args, Debug, Serialize)]
pub struct Common {
    /// Root seed for every random stream of the run.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory for report.json and data.csv.
    #[arg(long, default_value = "lqlab-out")]
    #[serde(skip)]
    pub out: PathBuf,
    /// Worker threads (overrides LQLAB_THREADS).
    #[arg(long)]
    pub threads: Option<usize>,
    /// Turn the command's check into exit code 3 on failure.
    #[arg(
        long = "assert",
        num_args = 0..=1,
        default_value_t = false,
        default_missing_value = "true",
        action = clap::ArgAction::Set
    )]
    pub assert: bool,
    /// Flat key = value file; command-line flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum SetName {
    Sphere,
    Ball,
    L1,
    Sparse,
    Ellipsoid,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum EnsembleName {
    Gaussian,
    Rademacher,
    BoundedUniform,
}

#[derive(Args, Debug, Serialize)]
pub struct SetArgs {
    #[arg(long, value_enum, default_value = "sphere")]
    pub set: SetName,
    /// Ambient dimension.
    #[arg(long, default_value_t = 8)]
    pub d: usize,
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    /// Sparsity of the sparse sphere.
    #[arg(long, default_value_t = 5)]
    pub sparsity: usize,
    /// Comma-separated semiaxes of the ellipsoid (defaults to all ones).
    #[arg(long)]
    pub semiaxes: Option<String>,
    #[arg(long, value_enum, default_value = "gaussian")]
    pub ensemble: EnsembleName,
}

#[derive(Args, Debug, Serialize)]
pub struct SearchArgs {
    #[arg(long = "net-max-points", default_value_t = 256)]
    pub net_max_points: usize,
    #[arg(long, default_value_t = 8)]
    pub restarts: usize,
    #[arg(long, default_value_t = 200)]
    pub steps: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub set: SetArgs,
    #[command(flatten)]
    pub search: SearchArgs,
    #[arg(long, default_value_t = 2.0)]
    pub q: f64,
    #[arg(long = "N", default_value_t = 256)]
    pub n: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Deviation parameter of the bound checked by --assert.
    #[arg(long, default_value_t = 3.0)]
    pub u: f64,
    /// Bound constant checked by --assert.
    #[arg(long = "C", default_value_t = 1.0)]
    pub c: f64,
    /// Comma-separated tail thresholds.
    #[arg(long)]
    pub thresholds: Option<String>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum FormName {
    Tail,
    Moment,
}

#[derive(Args, Debug, Serialize)]
pub struct BoundArgs {
    #[arg(long, default_value_t = 1.0)]
    pub gamma2: f64,
    #[arg(long, default_value_t = 1.0)]
    pub diam: f64,
    #[arg(long = "N", default_value_t = 1)]
    pub n: usize,
    /// Deviation parameter `u`, or moment order `p` for the moment form.
    #[arg(long, default_value_t = 1.0)]
    pub u: f64,
    #[arg(long, default_value_t = 2.0)]
    pub q: f64,
    #[arg(long = "C", default_value_t = 1.0)]
    pub c: f64,
    #[arg(long, value_enum, default_value = "tail")]
    pub form: FormName,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Serialize)]
pub struct ScalingArgs {
    #[command(flatten)]
    pub set: SetArgs,
    #[command(flatten)]
    pub search: SearchArgs,
    #[arg(long, default_value_t = 2.0)]
    pub q: f64,
    /// `start:stop:xFACTOR` or a comma-separated list.
    #[arg(long = "N-grid", default_value = "64:1024:x2")]
    pub n_grid: String,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long = "slope-min", default_value_t = -0.65)]
    pub slope_min: f64,
    #[arg(long = "slope-max", default_value_t = -0.35)]
    pub slope_max: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Serialize)]
pub struct RipArgs {
    #[command(flatten)]
    pub set: SetArgs,
    #[arg(long, default_value_t = 2.0)]
    pub q: f64,
    #[arg(long = "N", default_value_t = 200)]
    pub n: usize,
    /// Radius of the audited `L^q` sphere, or `solve`.
    #[arg(long = "R", default_value = "1")]
    pub r: String,
    #[arg(long, default_value_t = 1.0)]
    pub theta: f64,
    /// Ratio window `c` in (0, 1).
    #[arg(long, default_value_t = 0.5)]
    pub window: f64,
    #[arg(long, default_value_t = 1000)]
    pub audit: usize,
    #[arg(long = "mc-budget", default_value_t = 4096)]
    pub mc_budget: usize,
    /// Dense CSV design matrix (rows = observations) replacing the sample.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Serialize)]
pub struct SectionsArgs {
    #[command(flatten)]
    pub set: SetArgs,
    #[command(flatten)]
    pub search: SearchArgs,
    /// `l_p` exponent in (1, inf]; `inf` is accepted.
    #[arg(long, default_value = "2")]
    pub p: String,
    #[arg(long = "N", default_value_t = 16)]
    pub n: usize,
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    #[arg(long = "lambda-points", default_value_t = 0)]
    pub lambda_points: usize,
    /// Constant of the diameter bound checked by --assert.
    #[arg(long = "C", default_value_t = 2.5)]
    pub c: f64,
    #[arg(long = "mc-budget", default_value_t = 4096)]
    pub mc_budget: usize,
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Serialize)]
pub struct DiagArgs {
    #[command(flatten)]
    pub set: SetArgs,
    /// Sample size whose critical time splits the chains.
    #[arg(long = "N", default_value_t = 64)]
    pub n: usize,
    /// Deepest admissible level.
    #[arg(long, default_value_t = 3)]
    pub level: usize,
    /// Net resolution as a fraction of the diameter.
    #[arg(long = "eps-fraction", default_value_t = 0.1)]
    pub eps_fraction: f64,
    #[arg(long = "net-max-points", default_value_t = 256)]
    pub net_max_points: usize,
    #[arg(long = "mc-budget", default_value_t = 4096)]
    pub mc_budget: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Serialize)]
pub struct CalibrateArgs {
    #[command(flatten)]
    pub set: SetArgs,
    #[command(flatten)]
    pub search: SearchArgs,
    #[arg(long, default_value_t = 2.0)]
    pub q: f64,
    #[arg(long = "N-grid", default_value = "64:1024:x4")]
    pub n_grid: String,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Quantile level of the calibrated statistic.
    #[arg(long, default_value_t = 0.95)]
    pub level: f64,
    #[arg(long, default_value_t = 3.0)]
    pub u: f64,
    #[arg(long, value_enum, default_value = "tail")]
    pub form: FormName,
    /// Largest constant accepted by --assert.
    #[arg(long = "max-C", default_value_t = 100.0)]
    pub max_c: f64,
    #[command(flatten)]
    pub common: Common,
}
