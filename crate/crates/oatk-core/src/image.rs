//! Grayscale images in [0, 1] and binary PGM ("P5") file I/O.

use crate::error::{CoreError, Result};
use std::io::{Read, Write};
use std::path::Path;

/// Row-major H x W scalar field with values in [0, 1].
#[derive(Clone, Debug, PartialEq)]
pub struct Image {
    height: usize,
    width: usize,
    data: Vec<f64>,
}

impl Image {
    pub fn new(height: usize, width: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != height * width {
            return Err(CoreError::ShapeMismatch(format!(
                "image data length {} does not match {height}x{width}",
                data.len()
            )));
        }
        if !data.iter().all(|v| v.is_finite() && (0.0..=1.0).contains(v)) {
            return Err(CoreError::InvalidInput(
                "image values must be finite and within [0, 1]".into(),
            ));
        }
        Ok(Self { height, width, data })
    }

    pub fn zeros(height: usize, width: usize) -> Self {
        Self { height, width, data: vec![0.0; height * width] }
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.width + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        assert!((0.0..=1.0).contains(&value), "image value out of range");
        self.data[row * self.width + col] = value;
    }

    /// Clamp an arbitrary field into a valid image.
    pub fn from_clipped(height: usize, width: usize, data: &[f64]) -> Result<Self> {
        if data.len() != height * width {
            return Err(CoreError::ShapeMismatch(format!(
                "field length {} does not match {height}x{width}",
                data.len()
            )));
        }
        let clipped = data
            .iter()
            .map(|&v| if v.is_finite() { v.clamp(0.0, 1.0) } else { 0.0 })
            .collect();
        Ok(Self { height, width, data: clipped })
    }
}

/// Write `image` as binary PGM with the given maxval (255 or 65535).
/// Quantization rounds half away from zero; 16-bit samples are big-endian
/// per the PGM convention.
pub fn save_image(image: &Image, path: &Path, maxval: u32) -> Result<()> {
    let bytes = encode_pgm(image, maxval)?;
    let mut f = std::fs::File::create(path)?;
    f.write_all(&bytes)?;
    Ok(())
}

/// Read a binary PGM file into an [`Image`], scaling samples by 1/maxval.
pub fn load_image(path: &Path) -> Result<Image> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut bytes)?;
    decode_pgm(&bytes)
}

pub fn encode_pgm(image: &Image, maxval: u32) -> Result<Vec<u8>> {
    if maxval != 255 && maxval != 65535 {
        return Err(CoreError::InvalidInput(format!(
            "maxval must be 255 or 65535, got {maxval}"
        )));
    }
    let mut out = Vec::with_capacity(32 + image.data.len() * 2);
    out.extend_from_slice(
        format!("P5\n{} {}\n{}\n", image.width, image.height, maxval).as_bytes(),
    );
    let m = maxval as f64;
    for &v in &image.data {
        let q = (v * m + 0.5).floor() as u32;
        let q = q.min(maxval);
        if maxval == 255 {
            out.push(q as u8);
        } else {
            out.extend_from_slice(&(q as u16).to_be_bytes());
        }
    }
    Ok(out)
}

pub fn decode_pgm(bytes: &[u8]) -> Result<Image> {
    let mut pos = 0usize;

    if bytes.len() < 2 || &bytes[0..2] != b"P5" {
        let found = String::from_utf8_lossy(&bytes[..bytes.len().min(2)]).into_owned();
        return Err(CoreError::UnsupportedMagic { found });
    }
    pos += 2;

    let mut fields = [0usize; 3]; // width, height, maxval
    for field in fields.iter_mut() {
        *field = read_header_int(bytes, &mut pos)?;
    }
    let (width, height, maxval) = (fields[0], fields[1], fields[2]);
    if width == 0 || height == 0 {
        return Err(CoreError::MalformedHeader("zero image dimension".into()));
    }
    if maxval != 255 && maxval != 65535 {
        return Err(CoreError::MalformedHeader(format!(
            "unsupported maxval {maxval} (need 255 or 65535)"
        )));
    }

    // Exactly one whitespace byte separates the header from the payload.
    match bytes.get(pos) {
        Some(b) if b.is_ascii_whitespace() => pos += 1,
        _ => return Err(CoreError::MalformedHeader("missing payload separator".into())),
    }

    let n = width * height;
    let sample_bytes = if maxval > 255 { 2 } else { 1 };
    let expected = n * sample_bytes;
    let payload = &bytes[pos..];
    if payload.len() < expected {
        return Err(CoreError::TruncatedPayload { expected, got: payload.len() });
    }

    let scale = 1.0 / maxval as f64;
    let data: Vec<f64> = if sample_bytes == 1 {
        payload[..n].iter().map(|&b| f64::from(b) * scale).collect()
    } else {
        payload[..expected]
            .chunks_exact(2)
            .map(|c| f64::from(u16::from_be_bytes([c[0], c[1]])) * scale)
            .collect()
    };
    Image::new(height, width, data)
}

/// Parse the next ASCII integer in a PGM header, skipping whitespace and
/// `#` comment lines.
fn read_header_int(bytes: &[u8], pos: &mut usize) -> Result<usize> {
    loop {
        match bytes.get(*pos) {
            Some(b) if b.is_ascii_whitespace() => *pos += 1,
            Some(b'#') => {
                while let Some(&b) = bytes.get(*pos) {
                    *pos += 1;
                    if b == b'\n' {
                        break;
                    }
                }
            }
            Some(b) if b.is_ascii_digit() => break,
            Some(b) => {
                return Err(CoreError::MalformedHeader(format!(
                    "unexpected byte {:?} in header",
                    char::from(*b)
                )))
            }
            None => return Err(CoreError::MalformedHeader("header ended early".into())),
        }
    }
    let start = *pos;
    while matches!(bytes.get(*pos), Some(b) if b.is_ascii_digit()) {
        *pos += 1;
    }
    let text = std::str::from_utf8(&bytes[start..*pos]).expect("digits are ascii");
    text.parse::<usize>()
        .map_err(|e| CoreError::MalformedHeader(format!("bad integer {text:?}: {e}")))
}
