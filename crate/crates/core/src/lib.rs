//! Multiscale contrast amplification for grayscale radiographs.
//!
//! The crate covers the whole numeric side of the enhancement chain:
//!
//! * [`ImageF`], a dense `f64` grayscale raster, with min-max normalization
//!   and the `ln(1 + x)` / `e^x - 1` dynamic-range maps,
//! * a Laplacian [`Pyramid`] built on the 5-tap binomial kernel,
//! * the MUSICA detail-coefficient nonlinearity ([`MusicaParams`]),
//! * non-local means denoising ([`NlmParams`]),
//! * the conventional and multi-stage enhancement [`pipeline`],
//! * CNR images and their summary statistics ([`metrics`]).
//!
//! The crate is `no_std` with `alloc` when the default `std` feature is
//! turned off; transcendental functions then come from `libm`. File formats
//! and the command line live in the `musica-cli` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

mod error;
mod math;

pub mod denoise;
pub mod image;
pub mod metrics;
pub mod musica;
pub mod pipeline;
pub mod pyramid;

pub use crate::denoise::{nlm_denoise, NlmParams};
pub use crate::error::{Error, Result};
pub use crate::image::{clamp01, inverse_log, log_compress, normalize_minmax, ImageF};
pub use crate::metrics::{
    cnr_image, improvement_pct, noise_estimate, sdev_image, CnrReport, Summary,
};
pub use crate::musica::{amplify_coeff, apply_to_pyramid, musica_enhance, MusicaParams};
pub use crate::pipeline::{enhance, Mode, PipelineConfig};
pub use crate::pyramid::{decompose, expand, reconstruct, reduce, Pyramid};
