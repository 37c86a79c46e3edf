//! Acquisition geometry: a ring of point detectors around a centered square
//! pixel grid, plus the sampling clock that turns acoustic travel times into
//! sample indices. Everything downstream (simulation, delay-and-sum) works
//! off one immutable [`ScanGeometry`].

use crate::error::{CoreError, Result};
use crate::seeding::seeded_rng;
use rand::Rng;

pub const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// Acquisition parameters. Distances in meters, times in seconds, rates in Hz.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanConfig {
    /// Number of detector locations on the ring.
    pub n_detectors: usize,
    /// Ring radius (distance from grid center to each nominal detector).
    pub ring_radius: f64,
    /// Samples recorded per detector.
    pub n_samples: usize,
    /// Sampling frequency of the acquisition.
    pub sample_rate: f64,
    /// Speed of sound in the coupling medium.
    pub speed_of_sound: f64,
    /// Image grid is `image_size` x `image_size` pixels.
    pub image_size: usize,
    /// Edge length of one square pixel.
    pub pixel_size: f64,
    /// Detector position uncertainty as a fraction of the ring radius,
    /// applied per coordinate; must lie in [0, 0.01].
    pub position_jitter_frac: f64,
    /// Recording start time. `None` picks the latest start that still
    /// captures every pixel-to-detector arrival.
    pub acquisition_start: Option<f64>,
    /// Seed for the detector position jitter.
    pub rng_seed: u64,
}

impl Default for ScanConfig {
    /// Ring of 36 detectors at 44 mm, 41 MHz clock, 1024 samples,
    /// 1490 m/s, 128x128 grid of 115 um pixels, 0.1 % position jitter.
    fn default() -> Self {
        Self {
            n_detectors: 36,
            ring_radius: 0.044,
            n_samples: 1024,
            sample_rate: 41.0e6,
            speed_of_sound: 1490.0,
            image_size: 128,
            pixel_size: 115.0e-6,
            position_jitter_frac: 0.001,
            acquisition_start: None,
            rng_seed: 0,
        }
    }
}

impl ScanConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("ring_radius", self.ring_radius),
            ("sample_rate", self.sample_rate),
            ("speed_of_sound", self.speed_of_sound),
            ("pixel_size", self.pixel_size),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(CoreError::InvalidConfig(format!(
                    "{name} must be strictly positive, got {v}"
                )));
            }
        }
        if self.n_detectors == 0 || self.n_samples == 0 || self.image_size == 0 {
            return Err(CoreError::InvalidConfig(
                "n_detectors, n_samples and image_size must be nonzero".into(),
            ));
        }
        if self.image_size % 2 != 0 {
            return Err(CoreError::InvalidConfig(format!(
                "image_size must be even, got {}",
                self.image_size
            )));
        }
        if !(0.0..=0.01).contains(&self.position_jitter_frac) {
            return Err(CoreError::InvalidConfig(format!(
                "position_jitter_frac must lie in [0, 0.01], got {}",
                self.position_jitter_frac
            )));
        }
        if let Some(t) = self.acquisition_start {
            if !t.is_finite() || t < 0.0 {
                return Err(CoreError::InvalidConfig(format!(
                    "acquisition_start must be finite and nonnegative, got {t}"
                )));
            }
        }
        Ok(())
    }

    /// Half-diagonal of the pixel grid (center to corner pixel center).
    pub fn grid_half_diagonal(&self) -> f64 {
        let half_extent = (self.image_size as f64 - 1.0) / 2.0 * self.pixel_size;
        half_extent * SQRT_2
    }

    /// Worst-case shortest pixel-to-detector distance, accounting for the
    /// largest inward jitter displacement.
    fn min_distance_bound(&self) -> f64 {
        self.ring_radius * (1.0 - self.position_jitter_frac * SQRT_2) - self.grid_half_diagonal()
    }

    /// Worst-case longest pixel-to-detector distance.
    fn max_distance_bound(&self) -> f64 {
        self.ring_radius * (1.0 + self.position_jitter_frac * SQRT_2) + self.grid_half_diagonal()
    }

    /// Default recording start: the latest sample-aligned time that is still
    /// at or before the earliest possible arrival (jitter included).
    pub fn default_acquisition_start(&self) -> f64 {
        let earliest = self.min_distance_bound() / self.speed_of_sound;
        (self.sample_rate * earliest).floor() / self.sample_rate
    }
}

/// Realized geometry: jittered detector coordinates, the pixel grid, and
/// timing. Immutable once built; shared freely across threads.
#[derive(Clone, Debug)]
pub struct ScanGeometry {
    /// Detector coordinates, meters, indexed by detector.
    pub detector_xy: Vec<[f64; 2]>,
    /// Pixel-center coordinates, row-major over the grid.
    pub pixel_xy: Vec<[f64; 2]>,
    /// Grid side length in pixels.
    pub image_size: usize,
    /// Recording start time, seconds.
    pub t_start: f64,
    /// Sample spacing, seconds (1 / sample_rate).
    pub dt: f64,
    /// Sampling frequency, Hz.
    pub sample_rate: f64,
    /// Samples per detector trace.
    pub n_samples: usize,
    /// Speed of sound, m/s.
    pub speed_of_sound: f64,
    /// Pixel edge length, meters.
    pub pixel_size: f64,
}

impl ScanGeometry {
    pub fn n_detectors(&self) -> usize {
        self.detector_xy.len()
    }

    pub fn n_pixels(&self) -> usize {
        self.pixel_xy.len()
    }

    /// Acoustic travel time from a point to detector `d`.
    pub fn delay_seconds(&self, d: usize, x: f64, y: f64) -> f64 {
        let [dx, dy] = self.detector_xy[d];
        ((x - dx).powi(2) + (y - dy).powi(2)).sqrt() / self.speed_of_sound
    }

    /// Fractional sample index at which detector `d` hears a point at `(x, y)`.
    pub fn sample_index(&self, d: usize, x: f64, y: f64) -> f64 {
        (self.delay_seconds(d, x, y) - self.t_start) * self.sample_rate
    }
}

/// Build the realized geometry for `config`.
///
/// Detector `d` sits at angle `2*pi*d / n_detectors` on the ring, each
/// coordinate perturbed by an independent uniform offset bounded by
/// `position_jitter_frac * ring_radius` and drawn from `rng_seed`. Pixel
/// `(i, j)` maps to `((j - (W-1)/2) * px, ((H-1)/2 - i) * px)`: rows grow
/// downward in the image, +y points up in physical coordinates.
///
/// Rejects configs whose worst-case arrival-time span does not fit the
/// `n_samples` window starting at `t_start` (interpolated deposits need
/// indices within `[0, n_samples-2]`).
pub fn build_geometry(config: &ScanConfig) -> Result<ScanGeometry> {
    config.validate()?;

    if config.min_distance_bound() <= 0.0 {
        return Err(CoreError::InvalidConfig(
            "pixel grid reaches the detector ring; shrink the grid or enlarge the ring".into(),
        ));
    }

    let t_start = config
        .acquisition_start
        .unwrap_or_else(|| config.default_acquisition_start());

    let earliest = config.min_distance_bound() / config.speed_of_sound;
    let latest = config.max_distance_bound() / config.speed_of_sound;
    if t_start > earliest {
        return Err(CoreError::InvalidConfig(format!(
            "acquisition_start {t_start:.3e} s begins after the earliest possible arrival {earliest:.3e} s"
        )));
    }
    let span_samples = (latest - t_start) * config.sample_rate;
    if span_samples > (config.n_samples - 2) as f64 {
        return Err(CoreError::InvalidConfig(format!(
            "required time window of {span_samples:.1} samples exceeds the {} available",
            config.n_samples - 2
        )));
    }

    let mut rng = seeded_rng(config.rng_seed);
    let jitter = config.position_jitter_frac * config.ring_radius;
    let n = config.n_detectors;
    let detector_xy = (0..n)
        .map(|d| {
            let theta = 2.0 * std::f64::consts::PI * d as f64 / n as f64;
            let (sin, cos) = theta.sin_cos();
            // Two draws per detector in a fixed order keeps the jitter
            // stream independent of how positions are consumed later.
            let ox = rng.random_range(-1.0..=1.0) * jitter;
            let oy = rng.random_range(-1.0..=1.0) * jitter;
            [config.ring_radius * cos + ox, config.ring_radius * sin + oy]
        })
        .collect();

    let s = config.image_size;
    let px = config.pixel_size;
    let half = (s as f64 - 1.0) / 2.0;
    let mut pixel_xy = Vec::with_capacity(s * s);
    for i in 0..s {
        for j in 0..s {
            pixel_xy.push([(j as f64 - half) * px, (half - i as f64) * px]);
        }
    }

    Ok(ScanGeometry {
        detector_xy,
        pixel_xy,
        image_size: s,
        t_start,
        dt: 1.0 / config.sample_rate,
        sample_rate: config.sample_rate,
        n_samples: config.n_samples,
        speed_of_sound: config.speed_of_sound,
        pixel_size: px,
    })
}
