//! Grayscale raster type and the point-wise intensity maps.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Row-major grid of real-valued intensities.
///
/// Width and height are always positive and `data.len() == width * height`.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageF {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl ImageF {
    /// Wraps a row-major buffer.
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyImage);
        }
        let expected = width.checked_mul(height).ok_or(Error::EmptyImage)?;
        if data.len() != expected {
            return Err(Error::DataLength {
                expected,
                actual: data.len(),
            });
        }
        Ok(ImageF {
            width,
            height,
            data,
        })
    }

    /// Image with every pixel set to `value`.
    pub fn filled(width: usize, height: usize, value: f64) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyImage);
        }
        Ok(ImageF {
            width,
            height,
            data: vec![value; width * height],
        })
    }

    /// Image whose pixel `(x, y)` is `f(x, y)`.
    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> f64,
    ) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyImage);
        }
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Ok(ImageF {
            width,
            height,
            data,
        })
    }

    /// Builds an image from nested rows. All rows must have the same length.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(width * height);
        for row in rows {
            let row = row.as_ref();
            if row.len() != width {
                return Err(Error::DimensionMismatch {
                    expected: (width, height),
                    actual: (row.len(), height),
                });
            }
            data.extend_from_slice(row);
        }
        ImageF::new(width, height, data)
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    /// `(width, height)`.
    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    /// Number of pixels.
    #[inline]
    pub fn len(&self) -> usize {
        self.data.len()
    }

    /// Always `false`; an `ImageF` has at least one pixel.
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: f64) {
        self.data[y * self.width + x] = value;
    }

    #[inline]
    pub fn row(&self, y: usize) -> &[f64] {
        &self.data[y * self.width..(y + 1) * self.width]
    }

    /// Pixel at signed coordinates, mirrored back into the image
    /// (symmetric reflection without repeating the edge sample).
    #[inline]
    pub fn get_mirrored(&self, x: isize, y: isize) -> f64 {
        self.get(mirror(x, self.width), mirror(y, self.height))
    }

    /// Applies `f` to every pixel.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> ImageF {
        ImageF {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Smallest and largest pixel.
    pub fn min_max(&self) -> (f64, f64) {
        self.data
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }

    pub fn mean(&self) -> f64 {
        self.data.iter().sum::<f64>() / self.data.len() as f64
    }

    /// Fails on the first NaN or infinite pixel.
    pub fn check_finite(&self) -> Result<()> {
        match self.data.iter().position(|v| !v.is_finite()) {
            Some(index) => Err(Error::NonFinite { index }),
            None => Ok(()),
        }
    }

    /// Fails on the first pixel outside `[0, 1]`.
    pub fn check_unit_range(&self) -> Result<()> {
        self.check_finite()?;
        match self.data.iter().position(|v| !(0.0..=1.0).contains(v)) {
            Some(index) => Err(Error::NotNormalized {
                index,
                value: self.data[index],
            }),
            None => Ok(()),
        }
    }

    /// Largest absolute pixel difference against `other`.
    pub fn max_abs_diff(&self, other: &ImageF) -> Result<f64> {
        self.require_dims(other.dims())?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    pub(crate) fn require_dims(&self, expected: (usize, usize)) -> Result<()> {
        if self.dims() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                actual: self.dims(),
            });
        }
        Ok(())
    }
}

/// Reflects a signed index into `0..n` without repeating the edge sample
/// (`-1 -> 1`, `n -> n - 2`). Indices far outside fold repeatedly.
#[inline]
pub(crate) fn mirror(i: isize, n: usize) -> usize {
    if n == 1 {
        return 0;
    }
    let n = n as isize;
    if (0..n).contains(&i) {
        return i as usize;
    }
    let period = 2 * (n - 1);
    let m = i.rem_euclid(period);
    (if m >= n { period - m } else { m }) as usize
}

/// Spans at or below this fraction of the image magnitude are round-off,
/// not signal; [`normalize_minmax`] treats such images as constant.
pub const FLAT_SPAN: f64 = 1e-12;

/// Affine map onto `[0, 1]`: `(x - min) / (max - min)`.
///
/// A constant image maps to all zeros, and so does one whose spread is
/// within [`FLAT_SPAN`] of its magnitude (a constant that picked up
/// rounding noise in a filter bank).
pub fn normalize_minmax(img: &ImageF) -> Result<ImageF> {
    img.check_finite()?;
    let (lo, hi) = img.min_max();
    if hi - lo <= FLAT_SPAN * lo.abs().max(hi.abs()) {
        return Ok(img.map(|_| 0.0));
    }
    let span = hi - lo;
    Ok(img.map(|v| ((v - lo) / span).clamp(0.0, 1.0)))
}

/// Log compression `ln(1 + x)`. Pixels must be non-negative.
pub fn log_compress(img: &ImageF) -> Result<ImageF> {
    img.check_finite()?;
    if let Some(index) = img.data().iter().position(|&v| v < 0.0) {
        return Err(Error::Negative {
            index,
            value: img.data()[index],
        });
    }
    Ok(img.map(math::ln_1p))
}

/// Inverse of [`log_compress`]: `e^x - 1`.
pub fn inverse_log(img: &ImageF) -> Result<ImageF> {
    img.check_finite()?;
    let out = img.map(math::exp_m1);
    if let Some(index) = out.data().iter().position(|v| !v.is_finite()) {
        return Err(Error::Overflow {
            index,
            value: img.data()[index],
        });
    }
    Ok(out)
}

/// Clips every pixel to `[0, 1]`.
pub fn clamp01(img: &ImageF) -> ImageF {
    img.map(|v| v.clamp(0.0, 1.0))
}
