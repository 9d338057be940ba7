//! Command-line front end: configuration, artifact writers and subcommands.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::commands::ModulationMode;
use crate::config::{Provenance, RawConfig, RunConfig};
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "cpo-slm",
    version,
    about = "Pump-probe spatial light modulation simulator"
)]
pub struct Cli {
    /// Configuration file of `key = value` lines.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Override a configuration key, e.g. `--set omega_c=0.5`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    pub overrides: Vec<String>,

    /// Output directory.
    #[arg(long, default_value = ".", global = true)]
    pub out: PathBuf,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Phase,
    Amplitude,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Probe detuning sweep with the pump off and on.
    Spectrum,
    /// Response versus azimuth under the structured pump.
    Azimuthal {
        /// Comma-separated ensemble half-widths (overrides `sigma_c`).
        #[arg(long = "sigma-c")]
        sigma_c: Option<String>,
    },
    /// Pump intensity image.
    PumpImage {
        /// Number of folds (overrides `winding_l`).
        #[arg(long)]
        l: Option<u32>,
    },
    /// Forked binary grating.
    Fork,
    /// Slab thickness and discrepancy report.
    Thickness,
    /// Per-pixel modulation map.
    Modulate {
        #[arg(long, value_enum)]
        mode: ModeArg,
    },
    /// Gaussian probe through the phase plate and free space.
    Propagate,
    /// Closed form against the time-domain integrator.
    OracleCheck,
    /// Every artifact plus a manifest.
    All,
}

/// Builds the resolved configuration from defaults, file and flags.
pub fn load_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut raw = RawConfig::default();
    if let Some(path) = &cli.config {
        raw.merge_file(path)?;
    }
    for assignment in &cli.overrides {
        raw.merge_flag(assignment)?;
    }
    match &cli.command {
        Command::Azimuthal {
            sigma_c: Some(list),
        } => raw.set("sigma_c", list, Provenance::Flag)?,
        Command::PumpImage { l: Some(l) } => {
            raw.set("winding_l", &l.to_string(), Provenance::Flag)?
        }
        _ => {}
    }
    raw.resolve()
}

fn dispatch(cli: &Cli, cfg: &RunConfig, dir: &Path) -> Result<commands::Written, CliError> {
    match &cli.command {
        Command::Spectrum => commands::spectrum(cfg, dir),
        Command::Azimuthal { .. } => commands::azimuthal(cfg, dir),
        Command::PumpImage { .. } => commands::pump_image(cfg, dir, cfg.profile.winding_l),
        Command::Fork => commands::fork(cfg, dir),
        Command::Thickness => commands::thickness(cfg, dir),
        Command::Modulate { mode } => commands::modulate(
            cfg,
            dir,
            match mode {
                ModeArg::Phase => ModulationMode::Phase,
                ModeArg::Amplitude => ModulationMode::Amplitude,
            },
        ),
        Command::Propagate => commands::propagate(cfg, dir),
        Command::OracleCheck => commands::oracle_check(cfg, dir),
        Command::All => commands::all(cfg, dir),
    }
}

/// Runs one command on a dedicated thread pool and returns the files written.
pub fn run(cli: &Cli) -> Result<commands::Written, CliError> {
    let cfg = load_config(cli)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| CliError::config("threads", e.to_string()))?;
    pool.install(|| dispatch(cli, &cfg, &cli.out))
}
