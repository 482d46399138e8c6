//! `electra`: phase-count tables, figure data, condition checks, simulations
//! and periodicity fits for elimination-round leader election.

mod commands;
mod figures;
mod fixtures;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use electra_core::franklin::Variant;
use electra_core::{Init, SurvivorModel, TransitionMatrix};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] electra_core::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), source }
    }
}

#[derive(Debug, Parser, Serialize)]
#[command(name = "electra", version, about = "Phase counts of elimination-round leader election")]
pub struct Cli {
    /// Output directory.
    #[arg(long, global = true, env = "ELECTRA_OUT", default_value = "electra-out")]
    pub out: PathBuf,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
pub enum Command {
    /// Survivor law and round-count tables.
    Table(TableArgs),
    /// Plot data for one figure (fig1..fig12).
    Figure(FigureArgs),
    /// Check the hypotheses on the survivor law over a finite range.
    Check(CheckArgs),
    /// Monte Carlo simulation of the ring election.
    Simulate(SimulateArgs),
    /// Laplace/Fourier fit of the periodic part of the mean.
    Periodicity(PeriodicityArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum ModelName {
    Toy,
    DetHalving,
    FairCoin,
    BiasedCoin,
    CoinMaxOne,
    Demon,
    PeakLinearI,
    PeakLinearIi,
    PeakCircular,
    Explicit,
}

impl ModelName {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelName::Toy => "toy",
            ModelName::DetHalving => "det-halving",
            ModelName::FairCoin => "fair-coin",
            ModelName::BiasedCoin => "biased-coin",
            ModelName::CoinMaxOne => "coin-max-one",
            ModelName::Demon => "demon",
            ModelName::PeakLinearI => "peak-linear-i",
            ModelName::PeakLinearIi => "peak-linear-ii",
            ModelName::PeakCircular => "peak-circular",
            ModelName::Explicit => "explicit",
        }
    }

    pub fn is_peak(self) -> bool {
        matches!(self, ModelName::PeakLinearI | ModelName::PeakLinearIi | ModelName::PeakCircular)
    }
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum InitArg {
    Standard,
    Altcost,
}

impl From<InitArg> for Init {
    fn from(i: InitArg) -> Init {
        match i {
            InitArg::Standard => Init::Standard,
            InitArg::Altcost => Init::AltCost,
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct ModelArgs {
    #[arg(long, value_enum)]
    pub model: ModelName,
    /// Survival probability of a coin model (decimal or p/q).
    #[arg(long)]
    pub p: Option<String>,
    /// Demon kill probability.
    #[arg(long)]
    pub nu: Option<String>,
    /// CSV `i,j,prob` for the explicit model.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    /// Rows up to this n use exact rational arithmetic.
    #[arg(long)]
    pub exact_cutoff: Option<usize>,
}

impl ModelArgs {
    pub fn build(&self, default_cutoff: Option<usize>) -> Result<SurvivorModel, CliError> {
        let matrix = match &self.matrix {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
                Some(TransitionMatrix::from_csv(&text)?)
            }
            None => None,
        };
        let model = SurvivorModel::from_name(self.model.as_str(), self.p.as_deref(), self.nu.as_deref(), matrix)?;
        Ok(match self.exact_cutoff.or(default_cutoff) {
            Some(c) => model.with_exact_cutoff(c),
            None => model,
        })
    }

    /// Natural contraction factor `alpha` of the model.
    pub fn default_alpha(&self) -> Option<f64> {
        match self.model {
            ModelName::Toy | ModelName::DetHalving | ModelName::FairCoin => Some(0.5),
            ModelName::BiasedCoin | ModelName::CoinMaxOne | ModelName::Demon => {
                self.p.as_deref().and_then(|p| electra_core::rational::parse(p).ok()).map(|p| {
                    electra_core::rational::to_f64(&p)
                })
            }
            ModelName::PeakLinearI | ModelName::PeakLinearIi | ModelName::PeakCircular => Some(1.0 / 3.0),
            ModelName::Explicit => None,
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct TableArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, alias = "n-max", default_value_t = 20)]
    pub max_n: usize,
    #[arg(long, default_value_t = 1)]
    pub threshold: usize,
    #[arg(long, value_enum, default_value = "standard")]
    pub init: InitArg,
    /// Stop adding columns once every row has less than this mass left.
    #[arg(long, default_value_t = electra_core::phase::DEFAULT_COLUMN_EPS)]
    pub column_eps: f64,
    /// Compare against the published tables and fail on any mismatch.
    #[arg(long)]
    pub check_fixtures: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FigureArgs {
    /// fig1 .. fig12
    pub id: String,
    #[arg(long)]
    pub exact_cutoff: Option<usize>,
    /// Fourier harmonics for the reconstruction figures.
    #[arg(long, default_value_t = electra_core::metrics::DEFAULT_HARMONICS)]
    pub harmonics: usize,
    /// Add Gumbel/Gaussian reference curves where the figure has one.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    pub reference: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct CheckArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, alias = "max-n", default_value_t = 200)]
    pub n_max: usize,
    #[arg(long, default_value_t = 10)]
    pub n0: usize,
    #[arg(long, default_value_t = 0.5)]
    pub eps: f64,
    #[arg(long, default_value_t = 0.25)]
    pub delta_exponent: f64,
    #[arg(long, default_value_t = 1.0)]
    pub tail_bound: f64,
    #[arg(long, default_value_t = 10.0)]
    pub moment_bound: f64,
    #[arg(long, default_value_t = 6)]
    pub moment_p: u32,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum VariantArg {
    TruePersistent,
    RedrawCircular,
    RedrawLinearI,
    RedrawLinearIi,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::TruePersistent => Variant::TruePersistent,
            VariantArg::RedrawCircular => Variant::RedrawCircular,
            VariantArg::RedrawLinearI => Variant::RedrawLinearI,
            VariantArg::RedrawLinearIi => Variant::RedrawLinearII,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Estimate {
    /// Rounds and messages per trial.
    Rounds,
    /// Survivors after two rounds, over n.
    C2,
    /// 8-ring second round given 4 first-round survivors.
    Conditional,
}

#[derive(Debug, Args, Serialize)]
pub struct SimulateArgs {
    #[arg(long, value_enum, default_value = "true-persistent")]
    pub variant: VariantArg,
    #[arg(long, value_enum, default_value = "rounds")]
    pub estimate: Estimate,
    #[arg(long, alias = "max-n", default_value_t = 1000)]
    pub n: usize,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub threshold: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct PeriodicityArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 50)]
    pub n_min: usize,
    #[arg(long, alias = "n-max", default_value_t = 500)]
    pub max_n: usize,
    #[arg(long, default_value_t = electra_core::metrics::DEFAULT_HARMONICS)]
    pub harmonics: usize,
    #[arg(long, value_enum, default_value = "standard")]
    pub init: InitArg,
    /// Largest tolerated |transform(0) - 1|.
    #[arg(long, default_value_t = 0.02)]
    pub mass_tolerance: f64,
}

/// Outcome of a command: exit status and a one-line summary.
pub struct Outcome {
    pub passed: bool,
    pub summary: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(outcome) => {
            println!("{}", outcome.summary);
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                CliError::Io { .. } => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}
