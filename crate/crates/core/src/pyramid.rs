//! Laplacian pyramid on the 5-tap binomial kernel `(1, 4, 6, 4, 1) / 16`.
//!
//! Level sizes use ceiling division, so odd dimensions reconstruct exactly
//! without padding. Borders are mirrored without repeating the edge sample.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::image::{mirror, ImageF};

/// Deepest decomposition accepted by [`decompose`].
pub const MAX_LEVELS: usize = 24;

const KERNEL: [f64; 5] = [1.0 / 16.0, 4.0 / 16.0, 6.0 / 16.0, 4.0 / 16.0, 1.0 / 16.0];

/// Detail layers (finest first) plus the coarse residual.
#[derive(Debug, Clone, PartialEq)]
pub struct Pyramid {
    details: Vec<ImageF>,
    residual: ImageF,
}

#[inline]
fn half(n: usize) -> usize {
    n.div_ceil(2)
}

impl Pyramid {
    /// Assembles a pyramid, checking that every layer is the ceiling half of
    /// the one before it.
    pub fn from_parts(details: Vec<ImageF>, residual: ImageF) -> Result<Self> {
        if details.is_empty() || details.len() > MAX_LEVELS {
            return Err(Error::InvalidLevels {
                levels: details.len(),
            });
        }
        for pair in details.windows(2) {
            let (w, h) = pair[0].dims();
            pair[1].require_dims((half(w), half(h)))?;
        }
        let (w, h) = details[details.len() - 1].dims();
        residual.require_dims((half(w), half(h)))?;
        Ok(Pyramid { details, residual })
    }

    /// Number of detail layers.
    pub fn levels(&self) -> usize {
        self.details.len()
    }

    /// Detail layers, index 0 at full resolution.
    pub fn details(&self) -> &[ImageF] {
        &self.details
    }

    pub fn detail(&self, level: usize) -> &ImageF {
        &self.details[level]
    }

    /// Mutable pixels of one detail layer. Layer sizes stay fixed.
    pub fn detail_mut(&mut self, level: usize) -> &mut [f64] {
        self.details[level].data_mut()
    }

    pub fn residual(&self) -> &ImageF {
        &self.residual
    }

    pub fn into_parts(self) -> (Vec<ImageF>, ImageF) {
        (self.details, self.residual)
    }
}

/// Blurs with the binomial kernel and keeps every second sample in both
/// axes. Output is `ceil(w / 2) x ceil(h / 2)`.
pub fn reduce(img: &ImageF) -> ImageF {
    let (w, h) = img.dims();
    let (w2, h2) = (half(w), half(h));

    let mut tmp = vec![0.0; w2 * h];
    for y in 0..h {
        let row = img.row(y);
        let out = &mut tmp[y * w2..(y + 1) * w2];
        for (x2, o) in out.iter_mut().enumerate() {
            let c = 2 * x2 as isize;
            *o = KERNEL
                .iter()
                .enumerate()
                .map(|(m, k)| k * row[mirror(c + m as isize - 2, w)])
                .sum();
        }
    }

    let mut data = vec![0.0; w2 * h2];
    for y2 in 0..h2 {
        let c = 2 * y2 as isize;
        let out = &mut data[y2 * w2..(y2 + 1) * w2];
        for (m, k) in KERNEL.iter().enumerate() {
            let src = mirror(c + m as isize - 2, h);
            let src = &tmp[src * w2..(src + 1) * w2];
            for (o, s) in out.iter_mut().zip(src) {
                *o += k * s;
            }
        }
    }
    ImageF::new(w2, h2, data).expect("reduce keeps dimensions positive")
}

// One axis of the expand operator: `out[x] = 2 * sum_c k[x - 2c + 2] * src[c]`.
#[inline]
fn expand_taps(x: usize, n: usize) -> [(usize, f64); 3] {
    let c = (x / 2) as isize;
    if x % 2 == 0 {
        [
            (mirror(c - 1, n), 2.0 * KERNEL[4]),
            (mirror(c, n), 2.0 * KERNEL[2]),
            (mirror(c + 1, n), 2.0 * KERNEL[0]),
        ]
    } else {
        [
            (mirror(c, n), 2.0 * KERNEL[3]),
            (mirror(c + 1, n), 2.0 * KERNEL[1]),
            (0, 0.0),
        ]
    }
}

/// Upsamples by two and interpolates with the binomial kernel (gain 4) to
/// exactly `target_w x target_h`, which must satisfy
/// `ceil(target / 2) == img` in both axes.
pub fn expand(img: &ImageF, target_w: usize, target_h: usize) -> Result<ImageF> {
    let (w, h) = img.dims();
    if target_w == 0 || target_h == 0 || half(target_w) != w || half(target_h) != h {
        return Err(Error::DimensionMismatch {
            expected: (half(target_w), half(target_h)),
            actual: (w, h),
        });
    }

    let col_taps: Vec<_> = (0..target_w).map(|x| expand_taps(x, w)).collect();
    let mut tmp = vec![0.0; target_w * h];
    for y in 0..h {
        let row = img.row(y);
        let out = &mut tmp[y * target_w..(y + 1) * target_w];
        for (o, taps) in out.iter_mut().zip(&col_taps) {
            *o = taps.iter().map(|&(c, k)| k * row[c]).sum();
        }
    }

    let mut data = vec![0.0; target_w * target_h];
    for (y, out) in data.chunks_exact_mut(target_w).enumerate() {
        for (c, k) in expand_taps(y, h) {
            if k == 0.0 {
                continue;
            }
            let src = &tmp[c * target_w..(c + 1) * target_w];
            for (o, s) in out.iter_mut().zip(src) {
                *o += k * s;
            }
        }
    }
    ImageF::new(target_w, target_h, data)
}

/// Splits `img` into `levels` detail layers and a residual:
/// `detail[k] = gauss[k] - expand(gauss[k + 1])`, `residual = gauss[levels]`.
pub fn decompose(img: &ImageF, levels: usize) -> Result<Pyramid> {
    if levels == 0 || levels > MAX_LEVELS {
        return Err(Error::InvalidLevels { levels });
    }
    img.check_finite()?;
    let mut details = Vec::with_capacity(levels);
    let mut current = img.clone();
    for _ in 0..levels {
        let next = reduce(&current);
        let (w, h) = current.dims();
        let up = expand(&next, w, h)?;
        let mut detail = current;
        for (d, u) in detail.data_mut().iter_mut().zip(up.data()) {
            *d -= u;
        }
        details.push(detail);
        current = next;
    }
    Ok(Pyramid {
        details,
        residual: current,
    })
}

/// Inverts [`decompose`]: expands the residual and adds detail layers from
/// coarse to fine.
pub fn reconstruct(pyr: &Pyramid) -> Result<ImageF> {
    let mut current = pyr.residual.clone();
    for detail in pyr.details.iter().rev() {
        let (w, h) = detail.dims();
        let mut up = expand(&current, w, h)?;
        for (u, d) in up.data_mut().iter_mut().zip(detail.data()) {
            *u += d;
        }
        current = up;
    }
    Ok(current)
}
