//! Detector traces and the "OASINO01" binary container.

use crate::error::{CoreError, Result};
use crate::geometry::ScanGeometry;
use std::io::{Read, Write};
use std::path::Path;

const MAGIC: &[u8; 8] = b"OASINO01";

/// N_d x N_t pressure traces in arbitrary linear units.
#[derive(Clone, Debug, PartialEq)]
pub struct Sinogram {
    pub n_detectors: usize,
    pub n_samples: usize,
    /// Row-major: trace of detector `d` occupies `d*n_samples..(d+1)*n_samples`.
    pub data: Vec<f64>,
    /// Recording start time, seconds.
    pub t_start: f64,
    /// Sampling frequency, Hz.
    pub sample_rate: f64,
}

impl Sinogram {
    pub fn zeros_like(geom: &ScanGeometry) -> Self {
        Self {
            n_detectors: geom.n_detectors(),
            n_samples: geom.n_samples,
            data: vec![0.0; geom.n_detectors() * geom.n_samples],
            t_start: geom.t_start,
            sample_rate: geom.sample_rate,
        }
    }

    pub fn row(&self, d: usize) -> &[f64] {
        &self.data[d * self.n_samples..(d + 1) * self.n_samples]
    }

    pub fn matches(&self, geom: &ScanGeometry) -> Result<()> {
        if self.n_detectors != geom.n_detectors() || self.n_samples != geom.n_samples {
            return Err(CoreError::ShapeMismatch(format!(
                "sinogram {}x{} vs geometry {}x{}",
                self.n_detectors,
                self.n_samples,
                geom.n_detectors(),
                geom.n_samples
            )));
        }
        Ok(())
    }

    /// Mean squared amplitude over all entries.
    pub fn mean_power(&self) -> f64 {
        let n = self.data.len() as f64;
        self.data.iter().map(|v| v * v).sum::<f64>() / n
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(8 + 8 + 16 + self.data.len() * 4);
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&(self.n_detectors as u32).to_le_bytes());
        out.extend_from_slice(&(self.n_samples as u32).to_le_bytes());
        out.extend_from_slice(&self.t_start.to_le_bytes());
        out.extend_from_slice(&self.sample_rate.to_le_bytes());
        for &v in &self.data {
            out.extend_from_slice(&(v as f32).to_le_bytes());
        }
        out
    }

    pub fn decode(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 8 || &bytes[..8] != MAGIC {
            return Err(CoreError::UnknownFormat(format!(
                "bad sinogram magic {:?}",
                String::from_utf8_lossy(&bytes[..bytes.len().min(8)])
            )));
        }
        let header_len = 8 + 4 + 4 + 8 + 8;
        if bytes.len() < header_len {
            return Err(CoreError::TruncatedPayload { expected: header_len, got: bytes.len() });
        }
        let n_detectors = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
        let n_samples = u32::from_le_bytes(bytes[12..16].try_into().unwrap()) as usize;
        let t_start = f64::from_le_bytes(bytes[16..24].try_into().unwrap());
        let sample_rate = f64::from_le_bytes(bytes[24..32].try_into().unwrap());
        let expected = header_len + n_detectors * n_samples * 4;
        if bytes.len() < expected {
            return Err(CoreError::TruncatedPayload { expected, got: bytes.len() });
        }
        let data = bytes[header_len..expected]
            .chunks_exact(4)
            .map(|c| f64::from(f32::from_le_bytes([c[0], c[1], c[2], c[3]])))
            .collect();
        Ok(Self { n_detectors, n_samples, data, t_start, sample_rate })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        f.write_all(&self.encode())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let mut bytes = Vec::new();
        std::fs::File::open(path)?.read_to_end(&mut bytes)?;
        Self::decode(&bytes)
    }
}
