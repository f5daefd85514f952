//! Command-line syntax.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use musica_core::Mode;

use crate::config::{Command, RunConfig};
use crate::error::Result;

#[derive(Debug, Parser)]
#[command(
    name = "musica",
    version,
    about = "Multi-stage MUSICA enhancement and CNR evaluation for grayscale radiographs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Enhance one image and write the result.
    Enhance {
        input: PathBuf,
        /// Output image (.png or .pgm). Defaults to `<stem>_<mode>.png`
        /// next to the input.
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Compute CNR images and statistics for one or more images.
    Evaluate {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        /// Output directory for `cnr.csv`, `cnr_display.csv` and the CNR
        /// images. Defaults to the current directory.
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Compare original, conventional and multi-stage CNR over a directory.
    Batch {
        dir: PathBuf,
        /// Output directory for `report.csv` and `boxplot.svg`. Defaults to
        /// `musica-report`.
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        params: ParamArgs,
    },
}

fn parse_mode(s: &str) -> std::result::Result<Mode, String> {
    s.parse().map_err(|e| format!("{e}"))
}

/// Parameter flags shared by all commands. Unset flags fall back to the
/// config file, then to the defaults.
#[derive(Debug, Default, Args)]
pub struct ParamArgs {
    /// Config file with `key = value` lines.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// `conventional` or `multistage`.
    #[arg(long, value_parser = parse_mode)]
    pub mode: Option<Mode>,
    /// Pyramid depth.
    #[arg(long)]
    pub levels: Option<usize>,
    /// Amplification factor.
    #[arg(long)]
    pub a: Option<f64>,
    /// Coefficient bound.
    #[arg(long)]
    pub m: Option<f64>,
    /// Power-law exponent.
    #[arg(long)]
    pub p: Option<f64>,
    /// Noise control threshold.
    #[arg(long)]
    pub xc: Option<f64>,
    /// Run the denoising stage (multistage only).
    #[arg(long, overrides_with = "no_denoise")]
    pub denoise: bool,
    #[arg(long, overrides_with = "denoise")]
    pub no_denoise: bool,
    /// NLM filtering strength.
    #[arg(long = "h")]
    pub h: Option<f64>,
    /// NLM patch size (odd).
    #[arg(long)]
    pub patch: Option<usize>,
    /// NLM search window (odd).
    #[arg(long)]
    pub search: Option<usize>,
    /// Histogram bins for the noise estimate.
    #[arg(long)]
    pub bins: Option<usize>,
    /// Worker threads for batch runs (0 = all cores).
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Output bit depth for enhanced images (8 or 16).
    #[arg(long)]
    pub depth: Option<u8>,
    /// Record wall-clock time per row in the CSV.
    #[arg(long)]
    pub timing: bool,
}

impl Cli {
    /// Layers defaults, the config file and flags into one configuration.
    pub fn into_run_config(self) -> Result<RunConfig> {
        let (command, inputs, out, params) = match self.command {
            CliCommand::Enhance { input, out, params } => {
                (Command::Enhance, vec![input], out, params)
            }
            CliCommand::Evaluate {
                inputs,
                out,
                params,
            } => (Command::Evaluate, inputs, out, params),
            CliCommand::Batch { dir, out, params } => (Command::Batch, vec![dir], out, params),
        };
        let mut cfg = RunConfig::default();
        if let Some(path) = &params.config {
            cfg.apply_file(path)?;
        }
        cfg.command = command;
        cfg.inputs = inputs;
        if out.is_some() {
            cfg.out = out;
        }
        let s = &mut cfg.settings;
        macro_rules! overlay {
            ($($field:ident),*) => { $(if let Some(v) = params.$field { s.$field = v; })* };
        }
        overlay!(mode, levels, a, m, p, xc, h, patch, search, bins, jobs, depth);
        if params.denoise {
            s.denoise = true;
        }
        if params.no_denoise {
            s.denoise = false;
        }
        if params.timing {
            s.timing = true;
        }
        s.validate()?;
        Ok(cfg)
    }
}
