//! Multiscale image contrast amplification.
//!
//! Detail coefficients are pushed through an odd power law that boosts
//! small amplitudes and compresses large ones:
//!
//! ```text
//! y(x) = a M (x / x_c) (x_c / M)^p        |x| <  x_c
//! y(x) = a M sign(x) (|x| / M)^p          |x| >= x_c
//! ```
//!
//! Below the noise threshold `x_c` the map is linear so that fine grain is
//! not blown up by the steep part of the power curve. Coefficients outside
//! `[-M, M]` are clipped to the bound first. The residual layer is never
//! touched.

use crate::error::{Error, Result};
use crate::image::ImageF;
use crate::math;
use crate::pyramid::{decompose, reconstruct, Pyramid, MAX_LEVELS};

/// Amplification parameters shared by every pyramid level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MusicaParams {
    a: f64,
    m: f64,
    p: f64,
    xc: f64,
    levels: usize,
    // a * M * (x_c / M)^p / x_c, slope of the linear segment
    linear_gain: f64,
}

impl Default for MusicaParams {
    /// `a = 1`, `M = 1`, `p = 0.5`, `x_c = 0.01`, seven levels.
    fn default() -> Self {
        MusicaParams::new(1.0, 1.0, 0.5, 0.01, 7).expect("defaults are valid")
    }
}

impl MusicaParams {
    /// Checks `a > 0`, `M > 0`, `0 < p <= 1`, `0 < x_c < M` and
    /// `1 <= levels <= MAX_LEVELS`.
    pub fn new(a: f64, m: f64, p: f64, xc: f64, levels: usize) -> Result<Self> {
        let bad = |name, reason| Err(Error::InvalidParameter { name, reason });
        if !(a.is_finite() && a > 0.0) {
            return bad("a", "amplification must be finite and > 0");
        }
        if !(m.is_finite() && m > 0.0) {
            return bad("M", "coefficient bound must be finite and > 0");
        }
        if !(p > 0.0 && p <= 1.0) {
            return bad("p", "exponent must lie in (0, 1]");
        }
        if !(xc > 0.0 && xc < m) {
            return bad("x_c", "threshold must lie in (0, M)");
        }
        if levels == 0 || levels > MAX_LEVELS {
            return Err(Error::InvalidLevels { levels });
        }
        let linear_gain = a * m * math::powf(xc / m, p) / xc;
        Ok(MusicaParams {
            a,
            m,
            p,
            xc,
            levels,
            linear_gain,
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn xc(&self) -> f64 {
        self.xc
    }

    pub fn levels(&self) -> usize {
        self.levels
    }
}

/// The nonlinear coefficient map. `|x| == x_c` takes the power-law branch.
#[inline]
pub fn amplify_coeff(x: f64, params: &MusicaParams) -> f64 {
    let mag = x.abs().min(params.m);
    let y = if mag < params.xc {
        mag * params.linear_gain
    } else {
        params.a * params.m * math::powf(mag / params.m, params.p)
    };
    if x < 0.0 {
        -y
    } else {
        y
    }
}

/// Applies [`amplify_coeff`] to every detail coefficient; the residual is
/// copied through.
pub fn apply_to_pyramid(pyr: &Pyramid, params: &MusicaParams) -> Pyramid {
    let mut out = pyr.clone();
    amplify_in_place(&mut out, params);
    out
}

fn amplify_in_place(pyr: &mut Pyramid, params: &MusicaParams) {
    for level in 0..pyr.levels() {
        for c in pyr.detail_mut(level) {
            *c = amplify_coeff(*c, params);
        }
    }
}

/// Single-stage MUSICA: decompose, amplify details, reconstruct.
///
/// The input is expected in `[0, 1]`; no clamping is applied to the result.
pub fn musica_enhance(img: &ImageF, params: &MusicaParams) -> Result<ImageF> {
    let mut pyr = decompose(img, params.levels)?;
    amplify_in_place(&mut pyr, params);
    reconstruct(&pyr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn defaults() -> MusicaParams {
        MusicaParams::default()
    }

    #[test]
    fn defaults_match_reported_settings() {
        let p = defaults();
        assert_eq!(
            (p.a(), p.m(), p.p(), p.xc(), p.levels()),
            (1.0, 1.0, 0.5, 0.01, 7)
        );
    }

    #[test]
    fn rejects_invalid_params() {
        assert!(MusicaParams::new(0.0, 1.0, 0.5, 0.01, 7).is_err());
        assert!(MusicaParams::new(1.0, -1.0, 0.5, 0.01, 7).is_err());
        assert!(MusicaParams::new(1.0, 1.0, 0.0, 0.01, 7).is_err());
        assert!(MusicaParams::new(1.0, 1.0, 1.5, 0.01, 7).is_err());
        assert!(MusicaParams::new(1.0, 1.0, 0.5, 1.0, 7).is_err());
        assert!(MusicaParams::new(1.0, 1.0, 0.5, 0.0, 7).is_err());
        assert!(MusicaParams::new(1.0, 1.0, 0.5, 0.01, 0).is_err());
        assert!(MusicaParams::new(1.0, 1.0, f64::NAN, 0.01, 7).is_err());
        assert!(MusicaParams::new(1.0, 1.0, 1.0, 0.01, 7).is_ok());
    }

    #[test]
    fn coefficient_examples() {
        let p = defaults();
        assert_eq!(amplify_coeff(0.0, &p), 0.0);
        assert!((amplify_coeff(0.01, &p) - 0.1).abs() < 1e-15);
        assert_eq!(amplify_coeff(-1.0, &p), -1.0);
        assert!((amplify_coeff(0.005, &p) - 0.05).abs() < 1e-15);
    }

    #[test]
    fn clips_beyond_bound() {
        let p = defaults();
        assert_eq!(amplify_coeff(3.0, &p), 1.0);
        assert_eq!(amplify_coeff(-1.7, &p), -1.0);
    }

    #[test]
    fn single_layer_oracle() {
        // Element-wise evaluation of the formula for [0.01, -0.01, 0.5].
        let want = [0.1, -0.1, 0.5f64.sqrt()];
        let p = defaults();
        let details = vec![
            ImageF::new(3, 1, vec![0.01, -0.01, 0.5]).unwrap(),
            ImageF::filled(2, 1, 0.0).unwrap(),
        ];
        let residual = ImageF::filled(1, 1, 0.3).unwrap();
        let pyr = Pyramid::from_parts(details, residual).unwrap();
        let out = apply_to_pyramid(&pyr, &p);
        for (g, w) in out.detail(0).data().iter().zip(want) {
            assert!((g - w).abs() < 1e-15);
        }
        assert!(out.detail(1).data().iter().all(|&v| v == 0.0));
        assert_eq!(out.residual(), pyr.residual());
    }

    #[test]
    fn unit_exponent_is_identity() {
        let p = MusicaParams::new(1.0, 1.0, 1.0, 0.01, 3).unwrap();
        let img = ImageF::from_fn(20, 11, |x, y| ((x * 7 + y * 13) % 17) as f64 / 16.0).unwrap();
        let pyr = decompose(&img, 3).unwrap();
        assert_eq!(apply_to_pyramid(&pyr, &p), pyr);
        let out = musica_enhance(&img, &p).unwrap();
        assert!(out.max_abs_diff(&img).unwrap() <= 1e-6);
    }

    #[test]
    fn constant_image_unchanged() {
        let img = ImageF::filled(40, 30, 0.25).unwrap();
        let out = musica_enhance(&img, &defaults()).unwrap();
        assert!(out.max_abs_diff(&img).unwrap() < 1e-12);
    }

    #[test]
    fn disk_phantom_contrast_grows() {
        let (w, h) = (128usize, 128usize);
        let inside = |x: usize, y: usize| {
            let (dx, dy) = (x as f64 - 64.0, y as f64 - 64.0);
            dx * dx + dy * dy < 20.0 * 20.0
        };
        let img = ImageF::from_fn(w, h, |x, y| if inside(x, y) { 0.55 } else { 0.45 }).unwrap();
        let out = musica_enhance(&img, &defaults()).unwrap();
        let contrast = |im: &ImageF| {
            let (mut si, mut ni, mut so, mut no) = (0.0, 0, 0.0, 0);
            for y in 0..h {
                for x in 0..w {
                    if inside(x, y) {
                        si += im.get(x, y);
                        ni += 1;
                    } else {
                        so += im.get(x, y);
                        no += 1;
                    }
                }
            }
            si / ni as f64 - so / no as f64
        };
        let before = contrast(&img);
        let after = contrast(&out);
        assert!(after > before, "contrast {before} -> {after}");
    }
}
