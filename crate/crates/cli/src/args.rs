use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::grid::GridSpec;
use crate::table::Format;

#[derive(Debug, Parser)]
#[command(
    name = "solnoon",
    version,
    about = "Coupled-soliton dynamics, cat/N00N states and parity-detection metrology"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Relative tolerance for the ODE integrator and quadrature.
    #[arg(long = "rel-tol", global = true)]
    pub rel_tol: Option<f64>,
    /// Absolute tolerance for the ODE integrator and quadrature.
    #[arg(long = "abs-tol", global = true)]
    pub abs_tol: Option<f64>,
    /// Worker threads for parallel sweeps.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate the (p, θ) equations of motion.
    Dynamics(DynamicsArgs),
    /// Tabulate the nontrivial stationary points over Λ.
    Stationary(StationaryArgs),
    /// Cat size 1/ε = X^(−N) over |p0|.
    Catsize(CatsizeArgs),
    /// Parity mean and variance over the MZI phase.
    MziSweep(MziSweepArgs),
    /// Phase sensitivity against N with the SQL reference.
    Sensitivity(SensitivityArgs),
    /// Sensitivity for the nonlinear parameter Θ.
    ThetaSweep(ThetaSweepArgs),
    /// Check closed forms against the exact oracle and numerics.
    Verify(VerifyArgs),
}

/// Coupling given as Λ or as the triple (U, κ, N).
#[derive(Debug, Clone, Args)]
pub struct CouplingArgs {
    #[arg(long, conflicts_with_all = ["u", "kappa", "particles"])]
    pub lambda: Option<f64>,
    /// Interaction strength |U|.
    #[arg(long, requires_all = ["kappa", "particles"])]
    pub u: Option<f64>,
    /// Tunneling rate κ.
    #[arg(long, requires_all = ["u", "particles"])]
    pub kappa: Option<f64>,
    /// Total particle number for Λ = U²N²/(16|κ|).
    #[arg(long, requires_all = ["u", "kappa"])]
    pub particles: Option<u32>,
    /// Sign of the effective mass, 1 or -1.
    #[arg(long, default_value_t = 1)]
    pub mass: i32,
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct DynamicsArgs {
    #[command(flatten)]
    pub coupling: CouplingArgs,
    /// Initial population imbalance.
    #[arg(long)]
    pub p0: f64,
    /// Initial phase difference.
    #[arg(long, default_value_t = 0.0)]
    pub theta0: f64,
    /// Final dimensionless time t'.
    #[arg(long = "t-end", default_value_t = 100.0)]
    pub t_end: f64,
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct StationaryArgs {
    #[command(flatten)]
    pub coupling: CouplingArgs,
    /// Λ grid, used when no single coupling is given.
    #[arg(allow_hyphen_values = true, long = "lambda-grid", default_value = "0:2.42:243", conflicts_with_all = ["lambda", "u"])]
    pub lambda_grid: GridSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OverlapChoice {
    Parabolic,
    Exact,
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct CatsizeArgs {
    #[arg(long = "N", value_delimiter = ',', default_value = "100,1000,10000")]
    pub n: Vec<u32>,
    #[arg(
        allow_hyphen_values = true,
        long = "p0-grid",
        default_value = "0:1:101"
    )]
    pub p0_grid: GridSpec,
    /// Branch overlap X from the parabolic model or exact quadrature.
    #[arg(long, value_enum, default_value_t = OverlapChoice::Parabolic)]
    pub overlap: OverlapChoice,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StateChoice {
    Scs,
    Noon,
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct MziSweepArgs {
    #[arg(long, value_enum)]
    pub state: StateChoice,
    #[arg(long = "N")]
    pub n: u32,
    /// |p0| of the cat state.
    #[arg(long, default_value_t = 1.0)]
    pub p0: f64,
    /// N00N relative phase θ_N.
    #[arg(long = "theta-n", conflicts_with = "lambda")]
    pub theta_n: Option<f64>,
    /// N00N state prepared at coupling Λ.
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(
        allow_hyphen_values = true,
        long = "phi-grid",
        default_value = "-3.141592653589793:3.141592653589793:201"
    )]
    pub phi_grid: GridSpec,
    /// Add exact Dicke-space results next to the closed forms.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct SensitivityArgs {
    #[arg(long, value_enum)]
    pub state: StateChoice,
    #[arg(long = "N-min", default_value_t = 1)]
    pub n_min: u32,
    #[arg(long = "N-max", default_value_t = 100)]
    pub n_max: u32,
    /// |p0| values for the cat-state series.
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.25,0.5,1")]
    pub p0: Vec<f64>,
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct ThetaSweepArgs {
    #[arg(long = "N", value_delimiter = ',', default_value = "1,2,3,4")]
    pub n: Vec<u32>,
    #[arg(
        allow_hyphen_values = true,
        long = "theta-grid",
        default_value = "0:1.6:321"
    )]
    pub theta_grid: GridSpec,
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct VerifyArgs {
    /// Largest particle number handed to the oracle.
    #[arg(long = "N-max", default_value_t = 12)]
    pub n_max: u32,
    #[arg(long = "inject-alpha", hide = true)]
    pub inject_alpha: Option<f64>,
}
