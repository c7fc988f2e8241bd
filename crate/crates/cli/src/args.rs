use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Adiabatic dynamics of a spin 1/2 in a rotating magnetic field.
///
/// Units: hbar = 1, energies are angular frequencies, angles in radians.
#[derive(Debug, Parser)]
#[command(name = "adiabat", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate one run and write the time series as CSV.
    Evolve(EvolveArgs),
    /// Report the a priori and a posteriori criteria.
    Criteria(CriteriaArgs),
    /// Map both criteria over an (omega, theta) grid as CSV.
    Sweep(SweepArgs),
    /// Check the primed-system reduction against numerics.
    Primed(PrimedArgs),
    /// Measure the epsilon scaling of the adiabatic error.
    Scaling(ScalingArgs),
}

#[derive(Debug, Args)]
pub struct FieldArgs {
    /// Larmor frequency (gap) of the static field.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub omega0: f64,
    /// Signed rotation rate of the field.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub omega: f64,
    /// Cone angle of the field in radians, within [0, pi/2].
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    pub theta: f64,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Emit JSON (reports and error objects).
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// Final time; defaults to 20 periods 2 pi / omega0.
    #[arg(long)]
    pub t_final: Option<f64>,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Integrator accuracy target.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct CriteriaArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// Verdicts pass when a value is below this.
    #[arg(long, default_value_t = 0.1)]
    pub threshold: f64,
    /// Horizon of the minimum-fidelity scan, in rotation periods.
    #[arg(long, default_value_t = 100.0)]
    pub horizon: f64,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepMode {
    ClosedForm,
    Numeric,
    Both,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 1.0)]
    pub omega0: f64,
    #[arg(long, default_value_t = -2.0, allow_negative_numbers = true)]
    pub omega_min: f64,
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub omega_max: f64,
    #[arg(long, default_value_t = 41)]
    pub omega_count: usize,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub theta_min: f64,
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2, allow_negative_numbers = true)]
    pub theta_max: f64,
    #[arg(long, default_value_t = 21)]
    pub theta_count: usize,
    /// Horizon of the minimum-fidelity scan, in rotation periods.
    #[arg(long, default_value_t = 100.0)]
    pub horizon: f64,
    #[arg(long, value_enum, default_value_t = SweepMode::ClosedForm)]
    pub mode: SweepMode,
    /// Integrator accuracy target (numeric modes).
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Output samples per rotation period (numeric modes).
    #[arg(long, default_value_t = 64)]
    pub samples_per_period: usize,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct PrimedArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// End of the comparison grid; defaults to one rotation period.
    #[arg(long)]
    pub t_final: Option<f64>,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Largest accepted operator-norm residual.
    #[arg(long, default_value_t = 1e-4)]
    pub residual_bound: f64,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct ScalingArgs {
    /// Cone angle of the half-turn path.
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub theta: f64,
    /// Comma-separated adiabaticity parameters, each in (0, 0.2].
    #[arg(
        long,
        value_delimiter = ',',
        default_values_t = [0.1, 0.05, 0.02, 0.01, 0.005],
        allow_negative_numbers = true
    )]
    pub eps: Vec<f64>,
    #[command(flatten)]
    pub common: CommonArgs,
}
