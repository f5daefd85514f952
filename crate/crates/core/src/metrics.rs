//! Contrast-to-noise evaluation.
//!
//! The CNR image is the local standard deviation of the third Laplacian
//! detail layer divided by a global noise reference. The reference is the
//! most populated value of the standard-deviation histogram: flat, noisy
//! regions dominate the pixel count, so the mode tracks the noise floor
//! while structured regions sit above it.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::image::{mirror, ImageF};
use crate::math;
use crate::pyramid::decompose;

/// Zero-based index of the detail layer the CNR is measured on.
pub const CNR_LAYER: usize = 2;
/// Side of the square standard-deviation window.
pub const SDEV_WINDOW: usize = 9;
/// Histogram bins used for the noise reference unless overridden.
pub const DEFAULT_BINS: usize = 256;
/// Standard deviations at or below this are filter-bank round-off.
pub const NOISE_FLOOR: f64 = 1e-12;

/// Population standard deviation over a `window x window` neighbourhood,
/// evaluated every `stride` pixels. Borders are mirrored, so with
/// `stride == 1` the output has the input's size.
pub fn sdev_image(layer: &ImageF, window: usize, stride: usize) -> Result<ImageF> {
    if window == 0 || window % 2 == 0 {
        return Err(Error::InvalidParameter {
            name: "window",
            reason: "must be odd and positive",
        });
    }
    if stride == 0 {
        return Err(Error::InvalidParameter {
            name: "stride",
            reason: "must be positive",
        });
    }
    let (w, h) = layer.dims();
    if w < window || h < window {
        return Err(Error::WindowTooLarge {
            window,
            width: w,
            height: h,
        });
    }
    layer.check_finite()?;

    let r = (window / 2) as isize;
    let n = (window * window) as f64;
    let cols: Vec<usize> = (-r..w as isize + r).map(|x| mirror(x, w)).collect();
    let rows: Vec<usize> = (-r..h as isize + r).map(|y| mirror(y, h)).collect();
    let mut buf = vec![0.0; window * window];

    ImageF::from_fn(w.div_ceil(stride), h.div_ceil(stride), |ox, oy| {
        let (cx, cy) = (ox * stride, oy * stride);
        // Values are taken relative to the centre pixel: a constant window
        // then yields exactly zero.
        let centre = layer.get(cx, cy);
        let mut k = 0;
        for &sy in &rows[cy..cy + window] {
            let row = layer.row(sy);
            for &sx in &cols[cx..cx + window] {
                buf[k] = row[sx] - centre;
                k += 1;
            }
        }
        let mean = buf.iter().sum::<f64>() / n;
        let var = buf.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / n;
        math::sqrt(var)
    })
}

/// Centre of the most populated bin of a `bins`-bin histogram spanning
/// `[min, max]` of `sdev`. Ties go to the lower bin.
///
/// Fails with [`Error::DegenerateNoise`] when every value is at or below
/// [`NOISE_FLOOR`].
pub fn noise_estimate(sdev: &ImageF, bins: usize) -> Result<f64> {
    if bins == 0 {
        return Err(Error::InvalidParameter {
            name: "bins",
            reason: "must be positive",
        });
    }
    sdev.check_finite()?;
    if let Some(index) = sdev.data().iter().position(|&v| v < 0.0) {
        return Err(Error::Negative {
            index,
            value: sdev.data()[index],
        });
    }
    let (lo, hi) = sdev.min_max();
    if hi <= NOISE_FLOOR {
        return Err(Error::DegenerateNoise);
    }
    if hi == lo {
        return Ok(lo);
    }
    let span = hi - lo;
    let mut counts = vec![0usize; bins];
    for &v in sdev.data() {
        let idx = math::floor((v - lo) / span * bins as f64) as usize;
        counts[idx.min(bins - 1)] += 1;
    }
    let mut best = 0;
    for (i, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = i;
        }
    }
    Ok(lo + (best as f64 + 0.5) * span / bins as f64)
}

/// Order and moment statistics of a sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub min: f64,
    pub max: f64,
}

impl Summary {
    /// Quartiles interpolate linearly between order statistics
    /// (position `q * (n - 1)`). Returns `None` for an empty sample.
    pub fn of(values: &[f64]) -> Option<Summary> {
        if values.is_empty() {
            return None;
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len() as f64;
        let mean = sorted.iter().sum::<f64>() / n;
        let var = sorted.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        Some(Summary {
            mean,
            std: math::sqrt(var),
            median: quantile_sorted(&sorted, 0.5),
            q1: quantile_sorted(&sorted, 0.25),
            q3: quantile_sorted(&sorted, 0.75),
            min: sorted[0],
            max: sorted[sorted.len() - 1],
        })
    }
}

fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = math::floor(pos) as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    let frac = pos - lo as f64;
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

/// CNR image of one picture together with its noise reference and
/// summary statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct CnrReport {
    /// Per-pixel CNR at the resolution of the evaluated detail layer.
    pub cnr_image: ImageF,
    /// Noise reference the standard deviations were divided by.
    pub noise_level: f64,
    pub stats: Summary,
}

impl CnrReport {
    pub fn mean(&self) -> f64 {
        self.stats.mean
    }

    pub fn median(&self) -> f64 {
        self.stats.median
    }
}

/// Builds the CNR report of `img`: third detail layer, 9x9 standard
/// deviation at stride 1, histogram-mode noise reference with `bins` bins.
pub fn cnr_image(img: &ImageF, bins: usize) -> Result<CnrReport> {
    // Detail k depends only on Gaussian levels k and k + 1, so deeper
    // decompositions give the same layer.
    let pyr = decompose(img, CNR_LAYER + 1)?;
    let sdev = sdev_image(pyr.detail(CNR_LAYER), SDEV_WINDOW, 1)?;
    let noise_level = noise_estimate(&sdev, bins)?;
    let cnr = sdev.map(|s| s / noise_level);
    let stats = Summary::of(cnr.data()).expect("images are never empty");
    Ok(CnrReport {
        cnr_image: cnr,
        noise_level,
        stats,
    })
}

/// Relative change of the mean CNR in percent.
pub fn improvement_pct(before: &CnrReport, after: &CnrReport) -> Result<f64> {
    after.cnr_image.require_dims(before.cnr_image.dims())?;
    if before.mean() == 0.0 {
        return Err(Error::DegenerateBaseline);
    }
    Ok(100.0 * (after.mean() - before.mean()) / before.mean())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lcg_image(w: usize, h: usize, seed: u64) -> ImageF {
        let mut s = seed;
        ImageF::from_fn(w, h, |_, _| {
            s = s
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        })
        .unwrap()
    }

    fn fold(mut i: isize, n: usize) -> usize {
        let n = n as isize;
        loop {
            if i < 0 {
                i = -i;
            } else if i >= n {
                i = 2 * (n - 1) - i;
            } else {
                return i as usize;
            }
        }
    }

    fn naive_sdev(img: &ImageF, window: usize) -> ImageF {
        let r = (window / 2) as isize;
        ImageF::from_fn(img.width(), img.height(), |x, y| {
            let mut vals = Vec::new();
            for dy in -r..=r {
                for dx in -r..=r {
                    vals.push(img.get(
                        fold(x as isize + dx, img.width()),
                        fold(y as isize + dy, img.height()),
                    ));
                }
            }
            let m = vals.iter().sum::<f64>() / vals.len() as f64;
            (vals.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / vals.len() as f64).sqrt()
        })
        .unwrap()
    }

    fn report_with_mean(mean: f64) -> CnrReport {
        let img = ImageF::filled(2, 2, mean).unwrap();
        CnrReport {
            stats: Summary::of(img.data()).unwrap(),
            cnr_image: img,
            noise_level: 1.0,
        }
    }

    #[test]
    fn sdev_constant_is_zero() {
        let out = sdev_image(&ImageF::filled(12, 10, 0.123).unwrap(), 9, 1).unwrap();
        assert!(out.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn sdev_checkerboard_is_one() {
        let board =
            ImageF::from_fn(20, 20, |x, y| if (x + y) % 2 == 0 { 1.0 } else { -1.0 }).unwrap();
        let out = sdev_image(&board, 9, 1).unwrap();
        // An odd-sized window holds 41 of one sign and 40 of the other:
        // population sdev = sqrt(1 - (1/81)^2).
        let want = (1.0 - 1.0 / 6561.0f64).sqrt();
        assert!(out.data().iter().all(|v| (v - want).abs() < 1e-12));
        assert!(out.data().iter().all(|v| (v - 1.0).abs() < 1e-4));
    }

    #[test]
    fn sdev_matches_naive_16() {
        let img = lcg_image(16, 16, 42);
        let fast = sdev_image(&img, 9, 1).unwrap();
        let slow = naive_sdev(&img, 9);
        assert!(fast.max_abs_diff(&slow).unwrap() <= 1e-9);
    }

    #[test]
    fn sdev_stride_samples_centres() {
        let img = lcg_image(20, 13, 8);
        let full = sdev_image(&img, 5, 1).unwrap();
        let strided = sdev_image(&img, 5, 3).unwrap();
        assert_eq!(strided.dims(), (7, 5));
        for y in 0..5 {
            for x in 0..7 {
                assert_eq!(strided.get(x, y), full.get(3 * x, 3 * y));
            }
        }
    }

    #[test]
    fn sdev_rejects_small_layer_and_bad_window() {
        let img = ImageF::filled(8, 20, 0.0).unwrap();
        assert_eq!(
            sdev_image(&img, 9, 1),
            Err(Error::WindowTooLarge {
                window: 9,
                width: 8,
                height: 20
            })
        );
        assert!(sdev_image(&img, 4, 1).is_err());
        assert!(sdev_image(&img, 3, 0).is_err());
    }

    #[test]
    fn sdev_power_of_two_scaling_is_exact() {
        let img = lcg_image(24, 24, 3);
        let base = sdev_image(&img, 9, 1).unwrap();
        for c in [0.25, 2.0, 8.0] {
            let scaled = sdev_image(&img.map(|v| v * c), 9, 1).unwrap();
            for (s, b) in scaled.data().iter().zip(base.data()) {
                assert_eq!(*s, c * b);
            }
        }
    }

    #[test]
    fn noise_point_mass() {
        let img = ImageF::filled(5, 5, 0.05).unwrap();
        assert_eq!(noise_estimate(&img, 256).unwrap(), 0.05);
    }

    #[test]
    fn noise_histogram_mode() {
        let mut vals = vec![0.1; 70];
        vals.extend([0.5; 30]);
        let img = ImageF::new(10, 10, vals).unwrap();
        let got = noise_estimate(&img, 4).unwrap();
        // bin 0 = [0.1, 0.2) holds 70 samples
        assert!((got - 0.15).abs() < 1e-15);
    }

    #[test]
    fn noise_tie_prefers_lower_bin() {
        let mut vals = vec![0.2; 50];
        vals.extend([0.6; 50]);
        let img = ImageF::new(10, 10, vals).unwrap();
        let got = noise_estimate(&img, 2).unwrap();
        assert!((got - 0.3).abs() < 1e-15);
    }

    #[test]
    fn noise_errors() {
        let zeros = ImageF::filled(4, 4, 0.0).unwrap();
        assert_eq!(noise_estimate(&zeros, 256), Err(Error::DegenerateNoise));
        let neg = ImageF::new(2, 1, vec![0.1, -0.2]).unwrap();
        assert!(matches!(
            noise_estimate(&neg, 8),
            Err(Error::Negative { index: 1, .. })
        ));
        assert!(noise_estimate(&neg, 0).is_err());
    }

    #[test]
    fn summary_quartiles() {
        let s = Summary::of(&[4.0, 1.0, 3.0, 2.0, 5.0]).unwrap();
        assert_eq!(
            (s.min, s.q1, s.median, s.q3, s.max),
            (1.0, 2.0, 3.0, 4.0, 5.0)
        );
        assert_eq!(s.mean, 3.0);
        assert!((s.std - 2.0f64.sqrt()).abs() < 1e-15);
        let s = Summary::of(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!((s.q1, s.median, s.q3), (1.75, 2.5, 3.25));
        assert!(Summary::of(&[]).is_none());
    }

    #[test]
    fn cnr_is_sdev_over_noise() {
        let img = lcg_image(64, 48, 77).map(|v| v + 0.5);
        let rep = cnr_image(&img, DEFAULT_BINS).unwrap();
        let layer = decompose(&img, 7).unwrap().detail(CNR_LAYER).clone();
        let sdev = sdev_image(&layer, 9, 1).unwrap();
        assert_eq!(rep.cnr_image.dims(), (16, 12));
        for (c, s) in rep.cnr_image.data().iter().zip(sdev.data()) {
            assert_eq!(*c, s / rep.noise_level);
        }
        assert!(rep.stats.q1 <= rep.stats.median && rep.stats.median <= rep.stats.q3);
    }

    #[test]
    fn cnr_constant_is_degenerate() {
        for c in [0.5, 0.37, 0.0] {
            let img = ImageF::filled(64, 64, c).unwrap();
            assert_eq!(cnr_image(&img, 256), Err(Error::DegenerateNoise));
        }
    }

    #[test]
    fn improvement_examples() {
        let pct = |a, b| improvement_pct(&report_with_mean(a), &report_with_mean(b)).unwrap();
        assert_eq!(pct(0.2, 0.2), 0.0);
        assert!((pct(0.19, 0.30) - 57.894_736_842_105_26).abs() < 1e-9);
        assert!((pct(0.1, 0.25) - 150.0).abs() < 1e-9);
        assert_eq!(
            improvement_pct(&report_with_mean(0.0), &report_with_mean(0.3)),
            Err(Error::DegenerateBaseline)
        );
    }
}
