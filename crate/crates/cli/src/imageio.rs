//! Grayscale PNG and binary PGM (P5) reading and writing.
//!
//! Decoded samples are divided by the format's full-scale value, so every
//! loaded image lies in `[0, 1]`. Colour PNGs are reduced to the mean of
//! their colour channels; alpha is dropped.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use musica_core::ImageF;

use crate::error::{Error, Result};

/// On-disk container.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Png,
    Pgm,
}

impl Format {
    /// Picks the format from the file extension (`png`, `pgm`, `pnm`).
    pub fn from_path(path: &Path) -> Result<Format> {
        let ext = path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase);
        match ext.as_deref() {
            Some("png") => Ok(Format::Png),
            Some("pgm") | Some("pnm") => Ok(Format::Pgm),
            _ => Err(Error::Format {
                path: path.to_path_buf(),
                message: "unsupported extension; expected .png or .pgm".into(),
            }),
        }
    }

    fn sniff(bytes: &[u8]) -> Option<Format> {
        if bytes.starts_with(b"\x89PNG\r\n\x1a\n") {
            Some(Format::Png)
        } else if bytes.starts_with(b"P5") {
            Some(Format::Pgm)
        } else {
            None
        }
    }
}

/// A decoded input image.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceImage {
    pub path: PathBuf,
    /// 8 or 16, the stored sample width.
    pub bit_depth: u8,
    /// Samples divided by the full-scale value.
    pub pixels: ImageF,
}

/// Loads a PNG or P5 PGM file, detected by its signature.
pub fn load_grayscale(path: impl AsRef<Path>) -> Result<SourceImage> {
    let path = path.as_ref();
    let mut bytes = Vec::new();
    File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
    let format_err = |message: String| Error::Format {
        path: path.to_path_buf(),
        message,
    };
    let (bit_depth, pixels) = match Format::sniff(&bytes) {
        Some(Format::Png) => decode_png(&bytes).map_err(format_err)?,
        Some(Format::Pgm) => decode_pgm(&bytes).map_err(format_err)?,
        None => return Err(format_err("not a PNG or binary PGM file".into())),
    };
    Ok(SourceImage {
        path: path.to_path_buf(),
        bit_depth,
        pixels,
    })
}

/// Writes `img` at 8 or 16 bits, format chosen from the extension.
///
/// Pixels must already lie in `[0, 1]`; each is rounded half-up to the
/// nearest level.
pub fn save_grayscale(img: &ImageF, path: impl AsRef<Path>, bit_depth: u8) -> Result<()> {
    let path = path.as_ref();
    let format = Format::from_path(path)?;
    let levels = quantize(img, bit_depth)?;
    let (w, h) = img.dims();
    let mut out = Vec::with_capacity(levels.len() * 2 + 32);
    match format {
        Format::Pgm => encode_pgm(&mut out, w, h, bit_depth, &levels),
        Format::Png => {
            encode_png(&mut out, w, h, bit_depth, &levels).map_err(|e| Error::Format {
                path: path.to_path_buf(),
                message: e.to_string(),
            })?
        }
    }
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut file = BufWriter::new(File::create(path).map_err(io_err)?);
    file.write_all(&out).map_err(io_err)?;
    file.flush().map_err(io_err)
}

fn full_scale(bit_depth: u8) -> Result<f64> {
    match bit_depth {
        8 => Ok(255.0),
        16 => Ok(65535.0),
        _ => Err(Error::Usage(format!(
            "bit depth must be 8 or 16, got {bit_depth}"
        ))),
    }
}

/// Rounds `[0, 1]` pixels to integer levels (`floor(v * max + 0.5)`).
pub fn quantize(img: &ImageF, bit_depth: u8) -> Result<Vec<u16>> {
    let max = full_scale(bit_depth)?;
    img.check_unit_range().map_err(Error::Processing)?;
    Ok(img
        .data()
        .iter()
        .map(|&v| (v * max + 0.5).floor() as u16)
        .collect())
}

fn decode_png(bytes: &[u8]) -> std::result::Result<(u8, ImageF), String> {
    let mut decoder = png::Decoder::new(std::io::Cursor::new(bytes));
    decoder.set_transformations(png::Transformations::EXPAND);
    let mut reader = decoder.read_info().map_err(|e| e.to_string())?;
    let size = reader
        .output_buffer_size()
        .ok_or_else(|| "image too large".to_string())?;
    let mut buf = vec![0; size];
    let info = reader.next_frame(&mut buf).map_err(|e| e.to_string())?;
    let buf = &buf[..info.buffer_size()];

    let (wide, max) = match info.bit_depth {
        png::BitDepth::Sixteen => (true, 65535.0),
        _ => (false, 255.0),
    };
    let channels = info.color_type.samples();
    // colour channels averaged, trailing alpha ignored
    let colour = match info.color_type {
        png::ColorType::Grayscale | png::ColorType::GrayscaleAlpha => 1,
        _ => 3,
    };
    let sample = |i: usize| -> f64 {
        if wide {
            u16::from_be_bytes([buf[2 * i], buf[2 * i + 1]]) as f64
        } else {
            buf[i] as f64
        }
    };
    let (w, h) = (info.width as usize, info.height as usize);
    let mut data = Vec::with_capacity(w * h);
    for px in 0..w * h {
        let base = px * channels;
        let sum: f64 = (0..colour).map(|c| sample(base + c)).sum();
        data.push(sum / colour as f64 / max);
    }
    let img = ImageF::new(w, h, data).map_err(|e| e.to_string())?;
    Ok((if wide { 16 } else { 8 }, img))
}

fn encode_png(
    out: &mut Vec<u8>,
    w: usize,
    h: usize,
    bit_depth: u8,
    levels: &[u16],
) -> std::result::Result<(), png::EncodingError> {
    let mut encoder = png::Encoder::new(&mut *out, w as u32, h as u32);
    encoder.set_color(png::ColorType::Grayscale);
    let data: Vec<u8> = if bit_depth == 16 {
        encoder.set_depth(png::BitDepth::Sixteen);
        levels.iter().flat_map(|v| v.to_be_bytes()).collect()
    } else {
        encoder.set_depth(png::BitDepth::Eight);
        levels.iter().map(|&v| v as u8).collect()
    };
    let mut writer = encoder.write_header()?;
    writer.write_image_data(&data)?;
    writer.finish()
}

/// Parses a binary (P5) PGM. Samples are divided by the header's maxval;
/// maxval above 255 means two big-endian bytes per sample.
pub fn decode_pgm(bytes: &[u8]) -> std::result::Result<(u8, ImageF), String> {
    let mut pos = 0;
    let mut fields = [0usize; 3];
    if !bytes.starts_with(b"P5") {
        return Err("missing P5 magic".into());
    }
    pos += 2;
    for field in fields.iter_mut() {
        // whitespace and comments
        loop {
            match bytes.get(pos) {
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(b'#') => {
                    while bytes.get(pos).is_some_and(|&b| b != b'\n') {
                        pos += 1;
                    }
                }
                _ => break,
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(u8::is_ascii_digit) {
            pos += 1;
        }
        *field = std::str::from_utf8(&bytes[start..pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or("malformed PGM header")?;
    }
    let [w, h, maxval] = fields;
    if !bytes.get(pos).is_some_and(u8::is_ascii_whitespace) {
        return Err("malformed PGM header".into());
    }
    pos += 1;
    if maxval == 0 || maxval > 65535 {
        return Err(format!("PGM maxval {maxval} outside 1..=65535"));
    }
    let wide = maxval > 255;
    let bpp = if wide { 2 } else { 1 };
    let raster = &bytes[pos..];
    let needed = w
        .checked_mul(h)
        .and_then(|n| n.checked_mul(bpp))
        .ok_or("PGM dimensions overflow")?;
    if raster.len() < needed {
        return Err(format!(
            "PGM raster truncated: {} of {needed} bytes",
            raster.len()
        ));
    }
    let max = maxval as f64;
    let data = if wide {
        raster[..needed]
            .chunks_exact(2)
            .map(|b| (u16::from_be_bytes([b[0], b[1]]) as f64 / max).min(1.0))
            .collect()
    } else {
        raster[..needed]
            .iter()
            .map(|&b| (b as f64 / max).min(1.0))
            .collect()
    };
    let img = ImageF::new(w, h, data).map_err(|e| e.to_string())?;
    Ok((if wide { 16 } else { 8 }, img))
}

fn encode_pgm(out: &mut Vec<u8>, w: usize, h: usize, bit_depth: u8, levels: &[u16]) {
    let maxval = if bit_depth == 16 { 65535 } else { 255 };
    out.extend_from_slice(format!("P5\n{w} {h}\n{maxval}\n").as_bytes());
    if bit_depth == 16 {
        out.extend(levels.iter().flat_map(|v| v.to_be_bytes()));
    } else {
        out.extend(levels.iter().map(|&v| v as u8));
    }
}
