//! Image files: binary PPM (P6) / PGM (P5) through the `image` crate, and a
//! raw planar four-channel format.
//!
//! The planar format is an ASCII header line `QIMG4 n` followed by `4·n²`
//! little-endian `f64` samples: the `w`, `i`, `j`, `k` planes in that order,
//! each row-major.

use std::io::Write;
use std::path::Path;

use image::codecs::pnm::{PnmEncoder, PnmSubtype, SampleEncoding};
use image::{DynamicImage, ExtendedColorType, ImageFormat};
use qqmr_core::problems::ColorImage;

use crate::error::{AppError, Result};

const QIMG4_MAGIC: &[u8] = b"QIMG4";

/// Reads any supported image. Grayscale PGM maps to `R = G = B`.
pub fn read_image(path: impl AsRef<Path>) -> Result<ColorImage> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| AppError::io(path, e))?;
    decode_image(&bytes, path)
}

/// Decodes an in-memory file; `label` only names it in error messages.
pub fn decode_image(bytes: &[u8], label: &Path) -> Result<ColorImage> {
    if bytes.starts_with(QIMG4_MAGIC) {
        decode_qimg4(bytes, label)
    } else {
        decode_pnm(bytes, label)
    }
}

fn parse_err(path: &Path, msg: impl Into<String>) -> AppError {
    AppError::Parse { path: path.to_path_buf(), line: 1, msg: msg.into() }
}

fn decode_pnm(bytes: &[u8], path: &Path) -> Result<ColorImage> {
    let img = image::load_from_memory_with_format(bytes, ImageFormat::Pnm).map_err(|e| parse_err(path, e.to_string()))?;
    let (w, h) = (img.width() as usize, img.height() as usize);
    if w != h {
        return Err(AppError::Config(format!("{}: image is {w}x{h}, only square images are supported", path.display())));
    }
    let rgb = match img {
        DynamicImage::ImageLuma8(g) => g.into_raw().into_iter().flat_map(|v| [v; 3]).collect::<Vec<u8>>(),
        DynamicImage::ImageRgb8(c) => c.into_raw(),
        other => return Err(parse_err(path, format!("unsupported sample layout {:?}", other.color()))),
    };
    let samples: Vec<f64> = rgb.into_iter().map(f64::from).collect();
    Ok(ColorImage::from_rgb(w, &samples)?)
}

fn decode_qimg4(bytes: &[u8], path: &Path) -> Result<ColorImage> {
    let nl = bytes.iter().position(|&b| b == b'\n').ok_or_else(|| parse_err(path, "missing header newline"))?;
    let header = std::str::from_utf8(&bytes[..nl]).map_err(|_| parse_err(path, "header is not text"))?;
    let n: usize = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["QIMG4", n] => n.parse().map_err(|_| parse_err(path, format!("bad size `{n}`")))?,
        _ => return Err(parse_err(path, format!("malformed header `{header}`"))),
    };
    let body = &bytes[nl + 1..];
    if body.len() != 4 * n * n * 8 {
        return Err(parse_err(path, format!("expected {} bytes of samples, found {}", 4 * n * n * 8, body.len())));
    }
    let mut values = body.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")));
    let mut plane = || values.by_ref().take(n * n).collect::<Vec<f64>>();
    let planes = [plane(), plane(), plane(), plane()];
    Ok(ColorImage::from_planes(n, 4, planes)?)
}

/// Writes the RGB planes as binary PPM, clamping to `[0, 255]` and rounding.
pub fn write_ppm(path: impl AsRef<Path>, img: &ColorImage) -> Result<()> {
    let path = path.as_ref();
    let n = img.side() as u32;
    let raw: Vec<u8> = img.to_rgb().into_iter().map(|v| v.clamp(0.0, 255.0).round() as u8).collect();
    let file = std::fs::File::create(path).map_err(|e| AppError::io(path, e))?;
    let mut w = std::io::BufWriter::new(file);
    PnmEncoder::new(&mut w)
        .with_subtype(PnmSubtype::Pixmap(SampleEncoding::Binary))
        .encode(raw.as_slice(), n, n, ExtendedColorType::Rgb8)
        .map_err(|e| match e {
            image::ImageError::IoError(io) => AppError::io(path, io),
            other => AppError::io(path, std::io::Error::other(other)),
        })?;
    w.flush().map_err(|e| AppError::io(path, e))
}

pub fn write_qimg4(path: impl AsRef<Path>, img: &ColorImage) -> Result<()> {
    let path = path.as_ref();
    let n = img.side();
    let mut out = Vec::with_capacity(16 + 32 * n * n);
    writeln!(out, "QIMG4 {n}").expect("write to vec");
    for c in 0..4 {
        for v in img.plane(c) {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    std::fs::write(path, out).map_err(|e| AppError::io(path, e))
}

/// PPM for three channels, QIMG4 for four.
pub fn write_image(path: impl AsRef<Path>, img: &ColorImage) -> Result<()> {
    if img.channels() == 4 {
        write_qimg4(path, img)
    } else {
        write_ppm(path, img)
    }
}
