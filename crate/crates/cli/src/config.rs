//! Run configuration and its flat `key = value` file format.
//!
//! Keys mirror the long flag names. Blank lines and lines starting with
//! `#` are ignored; `input` may repeat. Values are layered as
//! built-in defaults, then the config file, then command-line flags.

use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use musica_core::{Mode, MusicaParams, NlmParams, PipelineConfig};

use crate::error::{Error, Result};

/// Which subcommand a configuration drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Command {
    #[default]
    Enhance,
    Evaluate,
    Batch,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Enhance => "enhance",
            Command::Evaluate => "evaluate",
            Command::Batch => "batch",
        }
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "enhance" => Ok(Command::Enhance),
            "evaluate" => Ok(Command::Evaluate),
            "batch" => Ok(Command::Batch),
            _ => Err(format!("unknown command `{s}`")),
        }
    }
}

/// Tunable parameters, unvalidated. [`Settings::pipeline`] checks them.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub mode: Mode,
    pub levels: usize,
    pub a: f64,
    pub m: f64,
    pub p: f64,
    pub xc: f64,
    pub denoise: bool,
    pub h: f64,
    pub patch: usize,
    pub search: usize,
    pub bins: usize,
    /// Worker threads for `batch`; 0 uses every core.
    pub jobs: usize,
    /// Bit depth of written enhanced images.
    pub depth: u8,
    /// Fill the `elapsed_ms` CSV column. Off by default so reports are
    /// reproducible byte for byte.
    pub timing: bool,
}

impl Default for Settings {
    fn default() -> Self {
        let musica = MusicaParams::default();
        let nlm = NlmParams::default();
        let pipeline = PipelineConfig::default();
        Settings {
            mode: pipeline.mode,
            levels: musica.levels(),
            a: musica.a(),
            m: musica.m(),
            p: musica.p(),
            xc: musica.xc(),
            denoise: pipeline.denoise_enabled,
            h: nlm.h(),
            patch: nlm.patch_size(),
            search: nlm.search_window(),
            bins: musica_core::metrics::DEFAULT_BINS,
            jobs: 0,
            depth: 16,
            timing: false,
        }
    }
}

impl Settings {
    /// Validated pipeline configuration. Bad values are usage errors.
    pub fn pipeline(&self) -> Result<PipelineConfig> {
        let usage = |e: musica_core::Error| Error::Usage(e.to_string());
        Ok(PipelineConfig {
            mode: self.mode,
            musica: MusicaParams::new(self.a, self.m, self.p, self.xc, self.levels)
                .map_err(usage)?,
            denoise_enabled: self.denoise,
            nlm: NlmParams::new(self.patch, self.search, self.h).map_err(usage)?,
        })
    }

    /// Checks the settings that are not part of the pipeline.
    pub fn validate(&self) -> Result<()> {
        if self.bins == 0 {
            return Err(Error::Usage("bins must be at least 1".into()));
        }
        if self.depth != 8 && self.depth != 16 {
            return Err(Error::Usage(format!(
                "depth must be 8 or 16, got {}",
                self.depth
            )));
        }
        self.pipeline().map(|_| ())
    }

    fn set(&mut self, key: &str, value: &str) -> std::result::Result<bool, String> {
        fn num<T: FromStr>(v: &str) -> std::result::Result<T, String> {
            v.parse().map_err(|_| format!("invalid number `{v}`"))
        }
        match key {
            "mode" => self.mode = value.parse().map_err(|e| format!("{e}"))?,
            "levels" => self.levels = num(value)?,
            "a" => self.a = num(value)?,
            "m" => self.m = num(value)?,
            "p" => self.p = num(value)?,
            "xc" => self.xc = num(value)?,
            "denoise" => self.denoise = parse_bool(value)?,
            "h" => self.h = num(value)?,
            "patch" => self.patch = num(value)?,
            "search" => self.search = num(value)?,
            "bins" => self.bins = num(value)?,
            "jobs" => self.jobs = num(value)?,
            "depth" => self.depth = num(value)?,
            "timing" => self.timing = parse_bool(value)?,
            _ => return Ok(false),
        }
        Ok(true)
    }
}

fn parse_bool(v: &str) -> std::result::Result<bool, String> {
    match v {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(format!("expected `true` or `false`, got `{v}`")),
    }
}

impl fmt::Display for Settings {
    /// One `key = value` line per setting.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "mode = {}", self.mode)?;
        writeln!(f, "levels = {}", self.levels)?;
        writeln!(f, "a = {}", self.a)?;
        writeln!(f, "m = {}", self.m)?;
        writeln!(f, "p = {}", self.p)?;
        writeln!(f, "xc = {}", self.xc)?;
        writeln!(f, "denoise = {}", self.denoise)?;
        writeln!(f, "h = {}", self.h)?;
        writeln!(f, "patch = {}", self.patch)?;
        writeln!(f, "search = {}", self.search)?;
        writeln!(f, "bins = {}", self.bins)?;
        writeln!(f, "jobs = {}", self.jobs)?;
        writeln!(f, "depth = {}", self.depth)?;
        writeln!(f, "timing = {}", self.timing)
    }
}

/// A complete invocation: command, paths and settings.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunConfig {
    pub command: Command,
    pub inputs: Vec<PathBuf>,
    pub out: Option<PathBuf>,
    pub settings: Settings,
}

impl RunConfig {
    /// Parses a whole config file on top of the defaults.
    pub fn parse(text: &str) -> std::result::Result<RunConfig, (usize, String)> {
        let mut cfg = RunConfig::default();
        cfg.apply(text)?;
        Ok(cfg)
    }

    /// Overlays the keys present in `text`. `input` lines replace the
    /// input list as a group. Errors carry the 1-based line number.
    pub fn apply(&mut self, text: &str) -> std::result::Result<(), (usize, String)> {
        let mut inputs = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |m: String| (i + 1, m);
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err("expected `key = value`".into()))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "command" => self.command = value.parse().map_err(err)?,
                "input" => inputs.push(PathBuf::from(value)),
                "out" => self.out = Some(PathBuf::from(value)),
                _ => {
                    if !self.settings.set(key, value).map_err(err)? {
                        return Err(err(format!("unknown key `{key}`")));
                    }
                }
            }
        }
        if !inputs.is_empty() {
            self.inputs = inputs;
        }
        Ok(())
    }

    /// Reads and overlays a config file.
    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        self.apply(&text).map_err(|(line, message)| Error::Config {
            path: path.to_path_buf(),
            line,
            message,
        })
    }

    /// Serializes to the config file format; [`RunConfig::parse`] reads it
    /// back unchanged.
    pub fn to_config_string(&self) -> String {
        let mut s = String::new();
        writeln!(s, "command = {}", self.command.as_str()).unwrap();
        for input in &self.inputs {
            writeln!(s, "input = {}", input.display()).unwrap();
        }
        if let Some(out) = &self.out {
            writeln!(s, "out = {}", out.display()).unwrap();
        }
        write!(s, "{}", self.settings).unwrap();
        s
    }
}
