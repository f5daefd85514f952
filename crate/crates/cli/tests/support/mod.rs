//! Shared test fixtures: reference oracles and synthetic chest phantoms.
#![allow(dead_code)]

#[path = "../../../core/tests/common/mod.rs"]
pub mod oracle;

use musica_core::{normalize_minmax, ImageF};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::{Distribution, Normal};

fn soft(d: f64, width: f64) -> f64 {
    1.0 / (1.0 + (d / width).exp())
}

/// Low-contrast chest-like radiograph: soft-edged body over air, two lung
/// fields with ribs, heart and spine, Gaussian noise, 8-bit quantization,
/// then min-max normalization. Geometry, contrast and noise vary with
/// `seed`.
pub fn chest_phantom(n: usize, seed: u64) -> ImageF {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut jitter = |s: f64| (rng.random::<f64>() - 0.5) * s;
    let body = (0.42 + jitter(0.04), 0.46 + jitter(0.04));
    let lung = 0.07 + jitter(0.02);
    let heart = 0.05 + jitter(0.02);
    let rib = 0.02 + jitter(0.01);
    let sigma = 0.008 + jitter(0.004);
    let tissue = 0.45 + jitter(0.05);
    let air = 0.08 + jitter(0.04);
    let normal = Normal::new(0.0, sigma).unwrap();
    let mut noise = StdRng::seed_from_u64(seed ^ 0xABCD_EF01);
    let f = n as f64;
    let img = ImageF::from_fn(n, n, |x, y| {
        let (u, v) = (x as f64 / f - 0.5, y as f64 / f - 0.5);
        let e = |cx: f64, cy: f64, rx: f64, ry: f64| {
            (((u - cx) / rx).powi(2) + ((v - cy) / ry).powi(2)).sqrt()
        };
        let inside = soft((e(0.0, 0.02, body.0, body.1) - 1.0) * 0.4, 0.01);
        let lungs = soft((e(-0.17, -0.03, 0.13, 0.3) - 1.0) * 0.2, 0.01)
            + soft((e(0.17, -0.03, 0.13, 0.3) - 1.0) * 0.2, 0.01);
        let heart_mask = soft((e(0.04, 0.12, 0.12, 0.12) - 1.0) * 0.12, 0.01);
        let ribs = if lungs > 0.5 {
            (v * 40.0 + 120.0 * u * u).sin().max(0.0).powi(4)
        } else {
            0.0
        };
        let spine = soft(u.abs() - 0.03, 0.005);
        let val = air + inside * (tissue - air) - lungs * lung
            + heart_mask * heart
            + ribs * rib * lungs
            + spine * 0.04 * inside
            + normal.sample(&mut noise);
        (val * 255.0).round().clamp(0.0, 255.0) / 255.0
    })
    .unwrap();
    normalize_minmax(&img).unwrap()
}
