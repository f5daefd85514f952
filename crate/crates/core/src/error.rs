use core::fmt;

/// Errors reported by the enhancement and evaluation routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An image with zero width or height.
    EmptyImage,
    /// Pixel buffer length does not match `width * height`.
    DataLength { expected: usize, actual: usize },
    /// A pixel is NaN or infinite.
    NonFinite { index: usize },
    /// A negative pixel was handed to the log map.
    Negative { index: usize, value: f64 },
    /// `e^x - 1` overflowed.
    Overflow { index: usize, value: f64 },
    /// Input expected in `[0, 1]` lies outside it.
    NotNormalized { index: usize, value: f64 },
    /// Two rasters (or a raster and a requested size) disagree.
    DimensionMismatch {
        expected: (usize, usize),
        actual: (usize, usize),
    },
    /// Pyramid depth is zero or above [`crate::pyramid::MAX_LEVELS`].
    InvalidLevels { levels: usize },
    /// A parameter violates its documented range.
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },
    /// The image is smaller than a sliding window.
    WindowTooLarge {
        window: usize,
        width: usize,
        height: usize,
    },
    /// The standard-deviation image is identically zero, so the noise
    /// reference is zero and the CNR undefined.
    DegenerateNoise,
    /// Relative change requested against a zero baseline.
    DegenerateBaseline,
}

/// Result alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyImage => write!(f, "image has zero width or height"),
            Error::DataLength { expected, actual } => {
                write!(f, "pixel buffer holds {actual} values, expected {expected}")
            }
            Error::NonFinite { index } => write!(f, "non-finite pixel at index {index}"),
            Error::Negative { index, value } => {
                write!(
                    f,
                    "negative pixel {value} at index {index} cannot be log-compressed"
                )
            }
            Error::Overflow { index, value } => {
                write!(f, "inverse log of {value} at index {index} overflows")
            }
            Error::NotNormalized { index, value } => {
                write!(f, "pixel {value} at index {index} lies outside [0, 1]")
            }
            Error::DimensionMismatch { expected, actual } => write!(
                f,
                "dimension mismatch: expected {}x{}, got {}x{}",
                expected.0, expected.1, actual.0, actual.1
            ),
            Error::InvalidLevels { levels } => write!(
                f,
                "pyramid depth {levels} outside 1..={}",
                crate::pyramid::MAX_LEVELS
            ),
            Error::InvalidParameter { name, reason } => write!(f, "invalid {name}: {reason}"),
            Error::WindowTooLarge {
                window,
                width,
                height,
            } => write!(
                f,
                "{window}x{window} window does not fit a {width}x{height} image"
            ),
            Error::DegenerateNoise => {
                write!(
                    f,
                    "standard deviation image is all zero; noise level undefined"
                )
            }
            Error::DegenerateBaseline => write!(f, "baseline mean CNR is zero"),
        }
    }
}

impl core::error::Error for Error {}
