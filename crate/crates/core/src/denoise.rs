//! Non-local means denoising.
//!
//! Each output pixel is the weighted mean of the pixels in its search
//! window, with weight `exp(-d2 / h^2)` where `d2` is the mean squared
//! difference between the two surrounding patches. The centre pixel enters
//! with weight 1. Borders are mirrored for both patches and search windows.
//!
//! The implementation walks the search offsets instead of the pixels: for a
//! fixed offset `o` the patch distances of all pixels come from one
//! squared-difference image and a separable box sum. Because
//! `d2(p, p + o) == d2(p + o, p)`, each weight computed for `o` also serves
//! offset `-o`, so only half of the offsets are visited.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::image::{mirror, ImageF};
use crate::math;

/// Patch size, search window and filtering strength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NlmParams {
    patch_size: usize,
    search_window: usize,
    h: f64,
}

impl Default for NlmParams {
    /// Patch 7, search window 21, `h = 0.1`.
    fn default() -> Self {
        NlmParams {
            patch_size: 7,
            search_window: 21,
            h: 0.1,
        }
    }
}

impl NlmParams {
    /// Both sizes must be odd with `patch_size <= search_window`; `h > 0`.
    pub fn new(patch_size: usize, search_window: usize, h: f64) -> Result<Self> {
        let bad = |name, reason| Err(Error::InvalidParameter { name, reason });
        if patch_size % 2 == 0 {
            return bad("patch size", "must be odd");
        }
        if search_window % 2 == 0 {
            return bad("search window", "must be odd");
        }
        if patch_size > search_window {
            return bad("patch size", "must not exceed the search window");
        }
        if !(h.is_finite() && h > 0.0) {
            return bad("h", "must be finite and > 0");
        }
        Ok(NlmParams {
            patch_size,
            search_window,
            h,
        })
    }

    pub fn patch_size(&self) -> usize {
        self.patch_size
    }

    pub fn search_window(&self) -> usize {
        self.search_window
    }

    pub fn h(&self) -> f64 {
        self.h
    }
}

/// Denoises `img` with non-local means.
pub fn nlm_denoise(img: &ImageF, params: &NlmParams) -> Result<ImageF> {
    img.check_finite()?;
    let (w, h) = img.dims();
    let rp = params.patch_size / 2;
    let rs = (params.search_window / 2) as isize;
    let pad = rs as usize + rp;
    let ew = w + 2 * pad;
    let eh = h + 2 * pad;

    let mut ext = Vec::with_capacity(ew * eh);
    for y in 0..eh {
        let row = img.row(mirror(y as isize - pad as isize, h));
        ext.extend((0..ew).map(|x| row[mirror(x as isize - pad as isize, w)]));
    }

    let patch = params.patch_size;
    let scale = 1.0 / ((patch * patch) as f64 * params.h * params.h);

    // offset 0: identical patches, weight 1
    let mut num = img.data().to_vec();
    let mut den = vec![1.0; w * h];

    let max_rw = w + rs as usize;
    let max_rh = h + rs as usize;
    let mut diff = vec![0.0; (max_rw + 2 * rp) * (max_rh + 2 * rp)];
    let mut vsum = vec![0.0; (max_rw + 2 * rp) * max_rh];
    let mut weight = vec![0.0; max_rw * max_rh];

    for dy in 0..=rs {
        for dx in -rs..=rs {
            if dy == 0 && dx <= 0 {
                continue;
            }
            // Anchor pixels p whose pair (p, p + o) has at least one member
            // inside the image: rows [-dy, h), cols [min(0, -dx), max(w, w - dx)).
            let x0 = (-dx).min(0);
            let rw = (w as isize + dx.abs()) as usize;
            let rh = h + dy as usize;
            let dw = rw + 2 * rp;
            let dh = rh + 2 * rp;

            // squared differences, region origin at (x0 - rp, -dy - rp)
            let ex0 = (x0 - rp as isize + pad as isize) as usize;
            let ey0 = (-dy - rp as isize + pad as isize) as usize;
            for r in 0..dh {
                let a = &ext[(ey0 + r) * ew + ex0..][..dw];
                let b_start = (ey0 + r + dy as usize) * ew;
                let b = &ext[(b_start as isize + ex0 as isize + dx) as usize..][..dw];
                for ((d, a), b) in diff[r * dw..][..dw].iter_mut().zip(a).zip(b) {
                    let t = a - b;
                    *d = t * t;
                }
            }

            // vertical patch sums
            for r in 0..rh {
                let out = &mut vsum[r * dw..][..dw];
                out.copy_from_slice(&diff[r * dw..][..dw]);
                for k in 1..patch {
                    for (o, d) in out.iter_mut().zip(&diff[(r + k) * dw..][..dw]) {
                        *o += d;
                    }
                }
            }

            // horizontal patch sums -> weights
            for r in 0..rh {
                let src = &vsum[r * dw..][..dw];
                for (c, out) in weight[r * rw..][..rw].iter_mut().enumerate() {
                    let s: f64 = src[c..c + patch].iter().sum();
                    *out = math::exp(-s * scale);
                }
            }

            // p in the image gains its neighbour p + o ...
            let fwd_col = (-x0) as usize;
            for y in 0..h {
                let wts = &weight[(y + dy as usize) * rw + fwd_col..][..w];
                let vals = &ext[(y + dy as usize + pad) * ew + (pad as isize + dx) as usize..][..w];
                let n = &mut num[y * w..][..w];
                let d = &mut den[y * w..][..w];
                for i in 0..w {
                    n[i] += wts[i] * vals[i];
                    d[i] += wts[i];
                }
            }
            // ... and q in the image gains q - o with the same weight.
            let bwd_col = (-dx - x0) as usize;
            for y in 0..h {
                let wts = &weight[y * rw + bwd_col..][..w];
                let vals = &ext[(y + pad - dy as usize) * ew + (pad as isize - dx) as usize..][..w];
                let n = &mut num[y * w..][..w];
                let d = &mut den[y * w..][..w];
                for i in 0..w {
                    n[i] += wts[i] * vals[i];
                    d[i] += wts[i];
                }
            }
        }
    }

    for (n, d) in num.iter_mut().zip(&den) {
        *n /= d;
    }
    ImageF::new(w, h, num)
}
