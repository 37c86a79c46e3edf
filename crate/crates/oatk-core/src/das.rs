//! Delay-and-sum beamforming.
//!
//! Each pixel sums every detector trace at that pixel's time-of-flight
//! delay, read by linear interpolation. Per-pixel sums run through an
//! order-invariant exact accumulator so that permuting detectors (together
//! with their geometry entries) cannot change a single output bit.

use crate::error::{CoreError, Result};
use crate::geometry::ScanGeometry;
use crate::image::Image;
use crate::numeric::{lerp_at, ExactSum};
use crate::parallel::map_indexed;
use crate::sinogram::Sinogram;

/// Raw beamformed field, before any normalization. Out-of-window delays
/// contribute zero.
pub fn das_raw(sino: &Sinogram, geom: &ScanGeometry) -> Result<Vec<f64>> {
    sino.matches(geom)?;
    Ok(map_indexed(geom.n_pixels(), |i| {
        let [x, y] = geom.pixel_xy[i];
        let mut acc = ExactSum::new();
        for d in 0..geom.n_detectors() {
            let u = geom.sample_index(d, x, y);
            acc.add(lerp_at(sino.row(d), u));
        }
        acc.value()
    }))
}

/// Min-max normalize a raw field into [0, 1]. A constant field maps to 0.5
/// everywhere.
pub fn normalize_field(field: &[f64]) -> Vec<f64> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in field {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !(hi > lo) {
        return vec![0.5; field.len()];
    }
    let scale = 1.0 / (hi - lo);
    field.iter().map(|&v| ((v - lo) * scale).clamp(0.0, 1.0)).collect()
}

/// Beamform a sinogram into a normalized [`Image`].
pub fn das_reconstruct(sino: &Sinogram, geom: &ScanGeometry) -> Result<Image> {
    let raw = das_raw(sino, geom)?;
    if raw.iter().any(|v| !v.is_finite()) {
        return Err(CoreError::Numeric("non-finite value in beamformed field".into()));
    }
    Image::new(geom.image_size, geom.image_size, normalize_field(&raw))
}
