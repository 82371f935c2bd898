//! Command-line flag surface.
//!
//! With no subcommand the binary runs a single experiment described by the
//! flags plus an optional config file (flags override the file). `sweep`
//! repeats an experiment over one swept parameter; `verify` checks
//! previously written reports.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{ExperimentConfig, RawConfig};
use crate::error::CliResult;

/// Kicked-rotor OTOC experiment runner.
#[derive(Debug, Parser)]
#[command(
    name = "otoc",
    version,
    about = "Kicked-rotor OTOC experiment runner",
    args_conflicts_with_subcommands = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Command>,

    #[command(flatten)]
    pub run: RunFlags,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one experiment per value of a swept parameter and merge results.
    Sweep(Box<SweepFlags>),
    /// Check verification reports; exit 0 only if every row passes.
    Verify(VerifyFlags),
}

/// Flags describing one experiment. Every field is optional here; required
/// fields are enforced after the config file has been layered in.
#[derive(Debug, Clone, Default, Args)]
pub struct RunFlags {
    /// Experiment kind: pp | tp | fotoc | energy | localization.
    #[arg(long)]
    pub kind: Option<String>,

    /// Kick strength K (>= 0).
    #[arg(long = "K", value_name = "REAL")]
    pub k: Option<String>,

    /// Effective Planck constant: a positive real, or `resonant` for the
    /// exact 4*pi resonance.
    #[arg(long, value_name = "REAL|resonant")]
    pub hbar: Option<String>,

    /// Translation angle epsilon (required for tp and fotoc).
    #[arg(long, value_name = "REAL")]
    pub epsilon: Option<String>,

    /// Basis size: a positive even integer, or `auto`.
    #[arg(long = "N", value_name = "INT|auto")]
    pub n: Option<String>,

    /// Largest kick count sampled.
    #[arg(long = "t-max", value_name = "INT")]
    pub t_max: Option<String>,

    /// Sampling stride: rows at t = stride, 2*stride, ... <= t-max.
    #[arg(long = "t-stride", value_name = "INT")]
    pub t_stride: Option<String>,

    /// Initial state: cosine | plane:<n0> | custom:<path>.
    #[arg(long)]
    pub initial: Option<String>,

    /// Correlator strategy: decomp | norm | both.
    #[arg(long)]
    pub method: Option<String>,

    /// Output data file (default otoc-<kind>.<format>).
    #[arg(long, value_name = "PATH")]
    pub out: Option<String>,

    /// Output format: csv | json.
    #[arg(long)]
    pub format: Option<String>,

    /// Verification tolerance (relative; absolute where theory is 0).
    #[arg(long, value_name = "REAL")]
    pub tol: Option<String>,

    /// Config file of `key = value` lines; flags override it.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
}

impl RunFlags {
    /// Layers these flags over the config file (if any): file first, flags
    /// win on conflict.
    pub fn to_raw(&self) -> CliResult<RawConfig> {
        let file = match &self.config {
            Some(path) => RawConfig::from_file(path)?,
            None => RawConfig::default(),
        };
        let mut flags = RawConfig::default();
        if let Some(v) = &self.kind {
            flags.set("kind", v)?;
        }
        if let Some(v) = &self.k {
            flags.set("K", v)?;
        }
        if let Some(v) = &self.hbar {
            flags.set("hbar", v)?;
        }
        if let Some(v) = &self.epsilon {
            flags.set("epsilon", v)?;
        }
        if let Some(v) = &self.n {
            flags.set("N", v)?;
        }
        if let Some(v) = &self.t_max {
            flags.set("t_max", v)?;
        }
        if let Some(v) = &self.t_stride {
            flags.set("t_stride", v)?;
        }
        if let Some(v) = &self.initial {
            flags.set("initial", v)?;
        }
        if let Some(v) = &self.method {
            flags.set("method", v)?;
        }
        if let Some(v) = &self.out {
            flags.set("out", v)?;
        }
        if let Some(v) = &self.format {
            flags.set("format", v)?;
        }
        if let Some(v) = &self.tol {
            flags.set("tol", v)?;
        }
        Ok(file.overlay(flags))
    }

    /// Full pipeline: file + flags, then validation.
    pub fn to_config(&self) -> CliResult<ExperimentConfig> {
        ExperimentConfig::resolve(&self.to_raw()?)
    }
}

#[derive(Debug, Args)]
pub struct SweepFlags {
    #[command(flatten)]
    pub run: RunFlags,

    /// Swept parameter: K | epsilon | hbar | N.
    #[arg(long)]
    pub axis: String,

    /// Comma-separated values for the swept parameter.
    #[arg(long, value_name = "V1,V2,...")]
    pub values: String,

    /// Worker pool size (default: OTOC_WORKERS or available parallelism).
    #[arg(long, value_name = "INT")]
    pub jobs: Option<usize>,
}

#[derive(Debug, Args)]
pub struct VerifyFlags {
    /// Report files to check: verification CSVs, data CSVs, or JSON reports.
    #[arg(required = true, value_name = "PATH")]
    pub paths: Vec<PathBuf>,

    /// Re-evaluate pass/fail against this tolerance instead of the
    /// recorded verdicts.
    #[arg(long, value_name = "REAL")]
    pub tol: Option<f64>,
}
