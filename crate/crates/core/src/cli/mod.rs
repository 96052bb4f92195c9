//! Command-line harness: `classify`, `solve`, `simulate`, `verify`, `sweep`.
//!
//! Every subcommand takes the same parameter flags. An optional TOML file
//! given with `--config` supplies defaults; flags win over file values.

mod commands;
pub mod output;

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::spectral::SpectralError;
use crate::waves::{Branch, WaveError};

pub use commands::{run_classify, run_simulate, run_solve, run_sweep, run_verify};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_CONSTRUCTION: i32 = 3;
pub const EXIT_BLOWUP: i32 = 4;
pub const EXIT_IO: i32 = 5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("run blew up at t = {t} (max|u| = {max_abs:e}); truncated output written")]
    BlowUp { t: f64, max_abs: f64 },
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Construction(_) => EXIT_CONSTRUCTION,
            CliError::BlowUp { .. } => EXIT_BLOWUP,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl From<WaveError> for CliError {
    fn from(e: WaveError) -> Self {
        CliError::Construction(e.to_string())
    }
}

impl From<SpectralError> for CliError {
    fn from(e: SpectralError) -> Self {
        match e {
            SpectralError::BlowUp { t, max_abs } => CliError::BlowUp { t, max_abs },
            SpectralError::InvalidNu(_)
            | SpectralError::InvalidDelta1(_)
            | SpectralError::InvalidGrid(_)
            | SpectralError::InvalidStep(_) => CliError::Config(e.to_string()),
            SpectralError::InitialData(_) | SpectralError::Wave(_) => {
                CliError::Construction(e.to_string())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum EquationKind {
    Third,
    Fifth,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum BranchArg {
    Plus,
    Minus,
}

impl From<BranchArg> for Branch {
    fn from(b: BranchArg) -> Self {
        match b {
            BranchArg::Plus => Branch::Plus,
            BranchArg::Minus => Branch::Minus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum FamilyArg {
    Soliton,
    Periodic,
    Weierstrass,
}

/// Initial data for `simulate`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum InitKind {
    /// The exact traveling wave described by the wave parameters.
    Wave,
    /// `0.5 sech²(x + 2) + 0.25 sech²(1.5(x − 3))`, a non-symmetric bump.
    Bump,
    /// `amplitude · cos(2π m x / L)`, set with `--mode` and `--amplitude`.
    Mode,
    Zero,
}

/// Every parameter a run can use. Field names double as TOML keys.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[arg(long, value_enum)]
    pub equation: Option<EquationKind>,
    #[arg(long)]
    pub nu: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub delta1: Option<f64>,
    #[arg(long)]
    pub delta2: Option<f64>,
    /// `δ2 − c δ1`; alternative to giving `--delta2`.
    #[arg(long)]
    pub mu2: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub a0: Option<f64>,
    #[arg(long)]
    pub a1: Option<f64>,
    #[arg(long)]
    pub b1: Option<f64>,
    #[arg(long, value_enum)]
    pub branch: Option<BranchArg>,
    #[arg(long, value_enum)]
    pub family: Option<FamilyArg>,
    #[arg(long = "L")]
    #[serde(rename = "L")]
    pub length: Option<f64>,
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub modes: Option<usize>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long = "T")]
    #[serde(rename = "T")]
    pub t_final: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// `start:stop:step`.
    #[arg(long, allow_hyphen_values = true)]
    pub c_range: Option<String>,
    /// `start:stop:step`.
    #[arg(long, allow_hyphen_values = true)]
    pub nu_range: Option<String>,
    /// `start:stop:step`.
    #[arg(long, allow_hyphen_values = true)]
    pub mu2_range: Option<String>,
    /// `lo:hi`; solve the constraint for `μ2` inside this bracket.
    #[arg(long, allow_hyphen_values = true)]
    pub mu2_bracket: Option<String>,
    /// `start:stop:count`.
    #[arg(long, allow_hyphen_values = true)]
    pub xi_range: Option<String>,
    /// Negative control for `verify`: checks the elliptic identity against
    /// a cubic with `a2` shifted by this amount.
    #[arg(long)]
    pub perturb_a2: Option<f64>,
    #[arg(long, value_enum)]
    pub init: Option<InitKind>,
    #[arg(long)]
    pub mode: Option<usize>,
    #[arg(long)]
    pub amplitude: Option<f64>,
    /// Number of snapshots written by `simulate`, including `t = 0` and `T`.
    #[arg(long)]
    pub snapshots: Option<usize>,
}

macro_rules! overlay {
    ($top:expr, $base:expr; $($f:ident),*) => {
        RunConfig {
            $($f: $top.$f.or($base.$f),)*
        }
    };
}

impl RunConfig {
    /// `self` with unset fields filled from `base`.
    pub fn overlay(self, base: RunConfig) -> RunConfig {
        overlay!(self, base; equation, nu, gamma, delta1, delta2, mu2, c, a0, a1, b1, branch,
            family, length, modes, dt, t_final, out, format, c_range, nu_range, mu2_range,
            mu2_bracket, xi_range, perturb_a2, init, mode, amplitude, snapshots)
    }

    pub fn from_toml(text: &str) -> Result<RunConfig, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    fn check_finite(&self) -> Result<(), CliError> {
        let fields = [
            ("nu", self.nu),
            ("gamma", self.gamma),
            ("delta1", self.delta1),
            ("delta2", self.delta2),
            ("mu2", self.mu2),
            ("c", self.c),
            ("a0", self.a0),
            ("a1", self.a1),
            ("b1", self.b1),
            ("L", self.length),
            ("dt", self.dt),
            ("T", self.t_final),
            ("perturb_a2", self.perturb_a2),
            ("amplitude", self.amplitude),
        ];
        for (name, v) in fields {
            if let Some(x) = v {
                if !x.is_finite() {
                    return Err(CliError::Config(format!("{name} = {x} is not finite")));
                }
            }
        }
        Ok(())
    }

    pub fn equation(&self) -> Result<EquationKind, CliError> {
        self.equation
            .ok_or_else(|| CliError::Config("--equation is required".into()))
    }

    pub fn require(&self, name: &str, v: Option<f64>) -> Result<f64, CliError> {
        v.ok_or_else(|| CliError::Config(format!("--{name} is required")))
    }

    pub fn branch(&self) -> Result<Branch, CliError> {
        self.branch
            .map(Branch::from)
            .ok_or_else(|| CliError::Config("--branch is required".into()))
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "kdvbbm",
    version,
    about = "Exact traveling waves and spectral runs for KdV-BBM equations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct CommandArgs {
    /// TOML file with default parameter values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub run: RunConfig,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Existence regions (third order) or constraint residuals (fifth order) on a grid.
    #[command(allow_negative_numbers = true)]
    Classify(CommandArgs),
    /// Sample a traveling-wave profile.
    #[command(allow_negative_numbers = true)]
    Solve(CommandArgs),
    /// Evolve the PDE and record energy diagnostics.
    #[command(allow_negative_numbers = true)]
    Simulate(CommandArgs),
    /// Residual report for a constructed wave.
    #[command(allow_negative_numbers = true)]
    Verify(CommandArgs),
    /// Scan wave speed for constructible waves and their families.
    #[command(allow_negative_numbers = true)]
    Sweep(CommandArgs),
}

/// Merges the config file (if any) under the flags.
pub fn resolve(args: &CommandArgs) -> Result<RunConfig, CliError> {
    let base = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            RunConfig::from_toml(&text)?
        }
        None => RunConfig::default(),
    };
    let cfg = args.run.clone().overlay(base);
    cfg.check_finite()?;
    Ok(cfg)
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Classify(a) => run_classify(&resolve(&a)?),
        Command::Solve(a) => run_solve(&resolve(&a)?),
        Command::Simulate(a) => run_simulate(&resolve(&a)?),
        Command::Verify(a) => run_verify(&resolve(&a)?),
        Command::Sweep(a) => run_sweep(&resolve(&a)?),
    }
}

/// Parses `args`, runs, reports errors on stderr and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
