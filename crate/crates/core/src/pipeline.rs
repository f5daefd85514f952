//! Conventional and multi-stage enhancement behind one entry point.
//!
//! Multi-stage processing runs:
//!
//! 1. MUSICA on the log-compressed image, then back through `e^x - 1`;
//! 2. min-max normalization and MUSICA again on the linear scale;
//! 3. optionally: normalize, log-compress, non-local means, `e^x - 1`;
//! 4. a final normalization and clamp to `[0, 1]`.
//!
//! The conventional baseline is a single MUSICA pass followed by the same
//! normalization and clamp. With a fixed bound `M = 1` a raw MUSICA result
//! typically spans about `[-1, 2]`; clamping it alone would saturate most of
//! the picture.

use core::fmt;
use core::str::FromStr;

use crate::denoise::{nlm_denoise, NlmParams};
use crate::error::Result;
use crate::image::{clamp01, inverse_log, log_compress, normalize_minmax, ImageF};
use crate::musica::{musica_enhance, MusicaParams};

/// Which enhancement chain to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum Mode {
    /// Single MUSICA pass.
    Conventional,
    /// Log-domain MUSICA, linear MUSICA, optional denoising.
    #[default]
    Multistage,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Conventional => "conventional",
            Mode::Multistage => "multistage",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Unknown mode name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseModeError;

impl fmt::Display for ParseModeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("expected `conventional` or `multistage`")
    }
}

impl FromStr for Mode {
    type Err = ParseModeError;

    fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
        match s {
            "conventional" => Ok(Mode::Conventional),
            "multistage" => Ok(Mode::Multistage),
            _ => Err(ParseModeError),
        }
    }
}

/// Everything [`enhance`] needs. Both MUSICA passes share `musica`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineConfig {
    pub mode: Mode,
    pub musica: MusicaParams,
    /// Ignored in conventional mode.
    pub denoise_enabled: bool,
    pub nlm: NlmParams,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            mode: Mode::Multistage,
            musica: MusicaParams::default(),
            denoise_enabled: true,
            nlm: NlmParams::default(),
        }
    }
}

impl PipelineConfig {
    /// Conventional single-pass settings with the default MUSICA parameters.
    pub fn conventional() -> Self {
        PipelineConfig {
            mode: Mode::Conventional,
            ..PipelineConfig::default()
        }
    }
}

/// Enhances an image whose pixels lie in `[0, 1]`. The result is in
/// `[0, 1]` and has the input's dimensions.
pub fn enhance(img: &ImageF, cfg: &PipelineConfig) -> Result<ImageF> {
    img.check_unit_range()?;
    match cfg.mode {
        Mode::Conventional => Ok(clamp01(&normalize_minmax(&musica_enhance(
            img,
            &cfg.musica,
        )?)?)),
        Mode::Multistage => {
            let log_stage = inverse_log(&musica_enhance(&log_compress(img)?, &cfg.musica)?)?;
            let mut out = musica_enhance(&normalize_minmax(&log_stage)?, &cfg.musica)?;
            if cfg.denoise_enabled {
                let compressed = log_compress(&normalize_minmax(&out)?)?;
                out = inverse_log(&nlm_denoise(&compressed, &cfg.nlm)?)?;
            }
            Ok(clamp01(&normalize_minmax(&out)?))
        }
    }
}
