use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use giantatom_core::CouplingCase;
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "giantatom",
    version,
    about = "Single-photon scattering and bound states of a giant atom in a coupled-resonator waveguide",
    args_override_self = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reflection and transmission rates on a wave-vector grid.
    Reflection(ReflectionArgs),
    /// Bound-state energies from the transcendental equation and from
    /// real-space diagonalization.
    Bound(BoundArgs),
    /// Real-space spectrum as a function of J (long format).
    Spectrum(SpectrumArgs),
    /// Photon distribution of one eigenstate, by site offset.
    Distribution(DistributionArgs),
    /// Critical coupling of the upper bound state against N.
    Critical(CriticalArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseArg {
    Two,
    Multi,
}

impl From<CaseArg> for CouplingCase {
    fn from(c: CaseArg) -> Self {
        match c {
            CaseArg::Two => CouplingCase::TwoPoint,
            CaseArg::Multi => CouplingCase::MultiPoint,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    #[arg(long, value_enum, default_value = "two")]
    pub case: CaseArg,
    /// Atom span: resonators 0..=N.
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Atom-waveguide coupling J, units of xi.
    #[arg(long, default_value_t = 0.5)]
    pub j: f64,
    #[arg(long, default_value_t = 20.0)]
    pub omega_c: f64,
    #[arg(long, default_value_t = 20.0)]
    pub omega_a: f64,
    /// Hopping used as the energy unit. Inputs and outputs stay in units of
    /// xi; the value is only carried into the output labels.
    #[arg(long, default_value_t = 1.0)]
    pub xi: f64,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// key=value file whose entries override command-line flags.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ReflectionArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// Number of interior points k_i = pi (i + 1) / (grid + 1).
    #[arg(long, default_value_t = 400)]
    pub k_grid: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BoundArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// Periodic lattice size for the real-space states.
    #[arg(long, default_value_t = 1201)]
    pub n_sites: usize,
    #[arg(long, default_value_t = 0.25)]
    pub pr_threshold: f64,
    #[arg(long, default_value_t = 3.0)]
    pub detach_threshold: f64,
    /// Also write the photon distributions of the real-space bound states.
    #[arg(long)]
    pub dump: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SpectrumArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 0.0)]
    pub j_min: f64,
    #[arg(long, default_value_t = 3.0)]
    pub j_max: f64,
    #[arg(long, default_value_t = 31)]
    pub j_steps: usize,
    #[arg(long, default_value_t = 101)]
    pub n_sites: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StateArg {
    Top,
    Bottom,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DistributionArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 101)]
    pub n_sites: usize,
    #[arg(long, value_enum, default_value = "top")]
    pub state: StateArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodArg {
    RealSpace,
    Edge,
    Both,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CriticalArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 2)]
    pub n_min: usize,
    #[arg(long, default_value_t = 20)]
    pub n_max: usize,
    #[arg(long, value_enum, default_value = "real-space")]
    pub method: MethodArg,
    /// Upper end of the J scan; defaults to 4 + N.
    #[arg(long)]
    pub j_hi: Option<f64>,
    #[arg(long, default_value_t = 1201)]
    pub n_sites: usize,
    #[arg(long, default_value_t = 0.25)]
    pub pr_threshold: f64,
    #[arg(long, default_value_t = 3.0)]
    pub detach_threshold: f64,
}
