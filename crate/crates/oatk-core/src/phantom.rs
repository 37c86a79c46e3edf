//! Synthetic ground-truth phantoms: anti-aliased disks and vessel-like
//! curvilinear tubes on a dark background.

use crate::error::{CoreError, Result};
use crate::image::Image;
use crate::seeding::seeded_rng;
use rand::Rng;

/// Kind of synthetic structure to draw.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhantomKind {
    /// 1-5 filled circles of random center, radius and intensity.
    Disks,
    /// 2-6 smooth polyline tubes, width 1-4 px, mimicking vasculature.
    Vessels,
}

impl std::str::FromStr for PhantomKind {
    type Err = CoreError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "disks" => Ok(Self::Disks),
            "vessels" => Ok(Self::Vessels),
            other => Err(CoreError::InvalidConfig(format!(
                "unknown phantom kind {other:?} (expected disks|vessels)"
            ))),
        }
    }
}

/// Generate a deterministic `size` x `size` phantom for `(kind, seed)`.
pub fn generate_phantom(size: usize, kind: PhantomKind, seed: u64) -> Result<Image> {
    if size < 8 {
        return Err(CoreError::InvalidConfig(format!(
            "phantom size must be at least 8, got {size}"
        )));
    }
    let mut field = vec![0.0f64; size * size];
    let mut rng = seeded_rng(seed);
    match kind {
        PhantomKind::Disks => {
            let n = rng.random_range(1..=5usize);
            for _ in 0..n {
                let r_max = (size as f64 / 4.0).max(2.0);
                let r = rng.random_range(2.0..=r_max);
                let margin = r + 1.0;
                let cx = rng.random_range(margin..(size as f64 - margin));
                let cy = rng.random_range(margin..(size as f64 - margin));
                let intensity = rng.random_range(0.3..=1.0);
                paint_disk(&mut field, size, cx, cy, r, intensity);
            }
        }
        PhantomKind::Vessels => {
            let n = rng.random_range(2..=6usize);
            for _ in 0..n {
                let width = rng.random_range(1.0..=4.0);
                let intensity = rng.random_range(0.3..=1.0);
                let pts = sample_polyline(&mut rng, size);
                for seg in pts.windows(2) {
                    paint_capsule(&mut field, size, seg[0], seg[1], width / 2.0, intensity);
                }
            }
        }
    }
    Image::new(size, size, field)
}

/// Max-composite an anti-aliased disk into the field. A pixel's coverage
/// ramps linearly over the one-pixel band straddling the circle boundary.
fn paint_disk(field: &mut [f64], size: usize, cx: f64, cy: f64, r: f64, intensity: f64) {
    let lo_y = ((cy - r - 1.0).floor().max(0.0)) as usize;
    let hi_y = ((cy + r + 1.0).ceil() as usize).min(size - 1);
    let lo_x = ((cx - r - 1.0).floor().max(0.0)) as usize;
    let hi_x = ((cx + r + 1.0).ceil() as usize).min(size - 1);
    for y in lo_y..=hi_y {
        for x in lo_x..=hi_x {
            let d = ((x as f64 - cx).powi(2) + (y as f64 - cy).powi(2)).sqrt();
            let coverage = (r + 0.5 - d).clamp(0.0, 1.0);
            if coverage > 0.0 {
                let v = intensity * coverage;
                let idx = y * size + x;
                field[idx] = field[idx].max(v);
            }
        }
    }
}

/// Random smooth polyline spanning the grid: a start point, a heading, and
/// small heading perturbations per segment. Points may leave the grid; the
/// rasterizer clips.
fn sample_polyline(rng: &mut impl Rng, size: usize) -> Vec<[f64; 2]> {
    let s = size as f64;
    let mut x = rng.random_range(0.1 * s..0.9 * s);
    let mut y = rng.random_range(0.1 * s..0.9 * s);
    let mut heading = rng.random_range(0.0..std::f64::consts::TAU);
    let n_seg = rng.random_range(4..=8usize);
    let seg_len = rng.random_range(0.08 * s..0.16 * s);
    let mut pts = vec![[x, y]];
    for _ in 0..n_seg {
        heading += rng.random_range(-0.5..0.5);
        x += seg_len * heading.cos();
        y += seg_len * heading.sin();
        pts.push([x, y]);
    }
    pts
}

/// Max-composite an anti-aliased thick segment (capsule) into the field.
fn paint_capsule(
    field: &mut [f64],
    size: usize,
    a: [f64; 2],
    b: [f64; 2],
    half_width: f64,
    intensity: f64,
) {
    let pad = half_width + 1.0;
    let lo_x = (a[0].min(b[0]) - pad).floor().max(0.0) as usize;
    let hi_x = ((a[0].max(b[0]) + pad).ceil().max(0.0) as usize).min(size.saturating_sub(1));
    let lo_y = (a[1].min(b[1]) - pad).floor().max(0.0) as usize;
    let hi_y = ((a[1].max(b[1]) + pad).ceil().max(0.0) as usize).min(size.saturating_sub(1));
    let ab = [b[0] - a[0], b[1] - a[1]];
    let len_sq = ab[0] * ab[0] + ab[1] * ab[1];
    for y in lo_y..=hi_y {
        for x in lo_x..=hi_x {
            let ap = [x as f64 - a[0], y as f64 - a[1]];
            let t = if len_sq > 0.0 {
                ((ap[0] * ab[0] + ap[1] * ab[1]) / len_sq).clamp(0.0, 1.0)
            } else {
                0.0
            };
            let dx = ap[0] - t * ab[0];
            let dy = ap[1] - t * ab[1];
            let d = (dx * dx + dy * dy).sqrt();
            let coverage = (half_width + 0.5 - d).clamp(0.0, 1.0);
            if coverage > 0.0 {
                let v = intensity * coverage;
                let idx = y * size + x;
                field[idx] = field[idx].max(v);
            }
        }
    }
}
