//! Matrix-free acoustic forward surrogate and its exact adjoint.
//!
//! The map from initial pressure to detector traces is modeled in two exactly
//! linear stages: (a) time-of-flight deposition, where pixel `i` adds
//! `p0(i) * px^2 / (4 pi v_s^2 tau)` onto the two time bins straddling its
//! fractional arrival index, and (b) a central time difference that turns
//! each deposit into the bipolar signature of an ideal point absorber. Both
//! stages transpose in closed form, so `<Ax, y> == <x, A^T y>` holds to
//! rounding, which is what model-based checks and the beamformer tests lean
//! on. This is a deliberate surrogate for a full wave solver: no
//! heterogeneity, no attenuation, no detector response.

use crate::error::{CoreError, Result};
use crate::geometry::ScanGeometry;
use crate::image::Image;
use crate::parallel::{for_each_chunk_mut, map_indexed};
use crate::seeding::seeded_rng;
use crate::sinogram::Sinogram;
use rand_distr::{Distribution, StandardNormal};

/// Time-of-flight deposition stage: pressure field -> per-detector deposits.
/// Exposed separately because several invariants (centroids, amplitude decay)
/// are statements about the deposits before differentiation.
pub fn deposit(field: &[f64], geom: &ScanGeometry) -> Result<Sinogram> {
    if field.len() != geom.n_pixels() {
        return Err(CoreError::ShapeMismatch(format!(
            "field length {} does not match grid of {} pixels",
            field.len(),
            geom.n_pixels()
        )));
    }
    let mut sino = Sinogram::zeros_like(geom);
    let n_samples = geom.n_samples;
    let scale = geom.pixel_size * geom.pixel_size
        / (4.0 * std::f64::consts::PI * geom.speed_of_sound * geom.speed_of_sound);
    for_each_chunk_mut(&mut sino.data, n_samples, |d, row| {
        let [dx, dy] = geom.detector_xy[d];
        for (i, &p) in field.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            let [x, y] = geom.pixel_xy[i];
            let dist = ((x - dx).powi(2) + (y - dy).powi(2)).sqrt();
            let tau = dist / geom.speed_of_sound;
            let u = (tau - geom.t_start) * geom.sample_rate;
            let amp = p * scale / tau;
            let i0 = u.floor();
            let w = u - i0;
            let lo = i0 as isize;
            if (0..n_samples as isize).contains(&lo) {
                row[lo as usize] += amp * (1.0 - w);
            }
            let hi = lo + 1;
            if (0..n_samples as isize).contains(&hi) {
                row[hi as usize] += amp * w;
            }
        }
    });
    Ok(sino)
}

/// Central time difference with zeroed endpoints, applied per trace.
fn time_derivative(sino: &mut Sinogram) {
    let n = sino.n_samples;
    let half_rate = sino.sample_rate / 2.0;
    for_each_chunk_mut(&mut sino.data, n, |_, row| {
        let prev: Vec<f64> = row.to_vec();
        row[0] = 0.0;
        for k in 1..n - 1 {
            row[k] = (prev[k + 1] - prev[k - 1]) * half_rate;
        }
        row[n - 1] = 0.0;
    });
}

/// Simulate detector traces for an initial pressure image.
pub fn simulate_sinogram(image: &Image, geom: &ScanGeometry) -> Result<Sinogram> {
    if image.height() != geom.image_size || image.width() != geom.image_size {
        return Err(CoreError::ShapeMismatch(format!(
            "image {}x{} does not match grid {}",
            image.height(),
            image.width(),
            geom.image_size
        )));
    }
    let mut sino = deposit(image.data(), geom)?;
    time_derivative(&mut sino);
    Ok(sino)
}

/// Exact transpose of [`simulate_sinogram`] as a linear map. Returns an
/// unnormalized image-shaped field (not clipped to [0, 1]).
pub fn apply_adjoint(sino: &Sinogram, geom: &ScanGeometry) -> Result<Vec<f64>> {
    sino.matches(geom)?;
    let n = geom.n_samples;
    let half_rate = geom.sample_rate / 2.0;

    // Transpose of the central difference: g[k] = (y[k-1] - y[k+1]) * fs/2,
    // where the zeroed endpoint rows of the forward contribute nothing.
    let mut diffed = Sinogram::zeros_like(geom);
    for_each_chunk_mut(&mut diffed.data, n, |d, out| {
        let row = sino.row(d);
        let at = |j: isize| -> f64 {
            if j >= 1 && (j as usize) <= n - 2 {
                row[j as usize]
            } else {
                0.0
            }
        };
        for (k, o) in out.iter_mut().enumerate() {
            *o = (at(k as isize - 1) - at(k as isize + 1)) * half_rate;
        }
    });

    // Transpose of the deposition: gather with the same weights.
    let scale = geom.pixel_size * geom.pixel_size
        / (4.0 * std::f64::consts::PI * geom.speed_of_sound * geom.speed_of_sound);
    let field = map_indexed(geom.n_pixels(), |i| {
        let [x, y] = geom.pixel_xy[i];
        let mut acc = 0.0;
        for d in 0..geom.n_detectors() {
            let [dx, dy] = geom.detector_xy[d];
            let dist = ((x - dx).powi(2) + (y - dy).powi(2)).sqrt();
            let tau = dist / geom.speed_of_sound;
            let u = (tau - geom.t_start) * geom.sample_rate;
            let amp = scale / tau;
            let i0 = u.floor();
            let w = u - i0;
            let lo = i0 as isize;
            let row = diffed.row(d);
            if (0..n as isize).contains(&lo) {
                acc += amp * (1.0 - w) * row[lo as usize];
            }
            let hi = lo + 1;
            if (0..n as isize).contains(&hi) {
                acc += amp * w * row[hi as usize];
            }
        }
        acc
    });
    Ok(field)
}

/// Add white Gaussian noise scaled for a target SNR in dB. `snr_db` of
/// `f64::INFINITY` returns the input unchanged.
pub fn add_noise(sino: &Sinogram, snr_db: f64, seed: u64) -> Result<Sinogram> {
    if snr_db == f64::INFINITY {
        return Ok(sino.clone());
    }
    if !snr_db.is_finite() {
        return Err(CoreError::InvalidInput(format!("snr_db must be finite, got {snr_db}")));
    }
    let power = sino.mean_power();
    if power == 0.0 {
        return Err(CoreError::InvalidInput(
            "SNR is undefined for an all-zero sinogram".into(),
        ));
    }
    let sigma = (power / 10f64.powf(snr_db / 10.0)).sqrt();
    let mut rng = seeded_rng(seed);
    let mut out = sino.clone();
    for v in &mut out.data {
        let z: f64 = StandardNormal.sample(&mut rng);
        *v += sigma * z;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_geometry, ScanConfig};
    use rand::Rng;

    fn small_geom(image_size: usize, n_detectors: usize) -> ScanGeometry {
        build_geometry(&ScanConfig {
            n_detectors,
            image_size,
            position_jitter_frac: 0.0,
            ..ScanConfig::default()
        })
        .unwrap()
    }

    fn random_image(size: usize, seed: u64) -> Image {
        let mut rng = seeded_rng(seed);
        let data = (0..size * size).map(|_| rng.random::<f64>()).collect();
        Image::new(size, size, data).unwrap()
    }

    fn dot(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    #[test]
    fn zero_image_gives_zero_sinogram() {
        let geom = small_geom(32, 8);
        let sino = simulate_sinogram(&Image::zeros(32, 32), &geom).unwrap();
        assert!(sino.data.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn linearity_of_forward_map() {
        let geom = small_geom(16, 6);
        let x = random_image(16, 1);
        let y = random_image(16, 2);
        let (a, b) = (0.7, -1.3);
        let combo: Vec<f64> = x
            .data()
            .iter()
            .zip(y.data())
            .map(|(xv, yv)| a * xv + b * yv)
            .collect();
        let s_combo = {
            let mut s = deposit(&combo, &geom).unwrap();
            time_derivative(&mut s);
            s
        };
        let sx = simulate_sinogram(&x, &geom).unwrap();
        let sy = simulate_sinogram(&y, &geom).unwrap();
        let peak = s_combo.data.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for ((c, xv), yv) in s_combo.data.iter().zip(&sx.data).zip(&sy.data) {
            assert!((c - (a * xv + b * yv)).abs() <= 1e-12 * peak.max(1.0));
        }
    }

    #[test]
    fn center_pixel_deposits_identically_across_detectors() {
        // A unit pixel exactly at the grid center is equidistant from every
        // unjittered detector, so each per-detector deposit is the same blip
        // centered at u = (R/v_s - t_start) * f_s. An even grid has no pixel
        // at the origin, so substitute a one-pixel grid there.
        let cfg = ScanConfig {
            image_size: 32,
            position_jitter_frac: 0.0,
            ..ScanConfig::default()
        };
        let mut geom = build_geometry(&cfg).unwrap();
        geom.pixel_xy = vec![[0.0, 0.0]];
        let field = vec![1.0];
        let sino = deposit(&field, &geom).unwrap();

        let u = (0.044 / 1490.0 - geom.t_start) * geom.sample_rate;
        let row0 = sino.row(0).to_vec();
        let peak = row0.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for d in 1..geom.n_detectors() {
            for (a, b) in sino.row(d).iter().zip(&row0) {
                // Trig rounding moves distances by ulps, so compare to a
                // tight relative tolerance rather than bit-for-bit.
                assert!((a - b).abs() <= 1e-9 * peak, "detector {d} differs");
            }
        }
        // Centroid of the deposit equals the fractional index exactly
        // (linear interpolation preserves the first moment).
        let total: f64 = row0.iter().sum();
        let first: f64 = row0.iter().enumerate().map(|(k, v)| k as f64 * v).sum();
        assert!((first / total - u).abs() < 1e-9, "centroid {} vs {u}", first / total);
    }

    #[test]
    fn adjoint_dot_product_identity() {
        let geom = small_geom(32, 8);
        let mut rng = seeded_rng(3);
        for trial in 0..20 {
            let x = random_image(32, 100 + trial);
            let mut y = Sinogram::zeros_like(&geom);
            for v in &mut y.data {
                *v = rng.random::<f64>() - 0.5;
            }
            let ax = simulate_sinogram(&x, &geom).unwrap();
            let aty = apply_adjoint(&y, &geom).unwrap();
            let lhs = dot(&ax.data, &y.data);
            let rhs = dot(x.data(), &aty);
            let denom = lhs.abs().max(rhs.abs()).max(1e-30);
            assert!(
                ((lhs - rhs) / denom).abs() <= 1e-10,
                "trial {trial}: <Ax,y>={lhs} <x,Aty>={rhs}"
            );
        }
    }

    #[test]
    fn zero_sinogram_gives_zero_field() {
        let geom = small_geom(16, 4);
        let field = apply_adjoint(&Sinogram::zeros_like(&geom), &geom).unwrap();
        assert!(field.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn normal_operator_localizes_impulse() {
        let geom = small_geom(32, 36);
        let mut img = Image::zeros(32, 32);
        let (r, c) = (13, 20);
        img.set(r, c, 1.0);
        let sino = simulate_sinogram(&img, &geom).unwrap();
        let field = apply_adjoint(&sino, &geom).unwrap();
        let argmax = field
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        let (rr, cc) = (argmax / 32, argmax % 32);
        let d2 = (rr as f64 - r as f64).powi(2) + (cc as f64 - c as f64).powi(2);
        assert!(d2.sqrt() <= 2.0, "peak at ({rr},{cc}) vs source ({r},{c})");
    }

    #[test]
    fn noise_sentinel_and_determinism() {
        let geom = small_geom(16, 4);
        let sino = simulate_sinogram(&random_image(16, 5), &geom).unwrap();
        let clean = add_noise(&sino, f64::INFINITY, 0).unwrap();
        assert_eq!(clean.data, sino.data);
        let a = add_noise(&sino, 40.0, 123).unwrap();
        let b = add_noise(&sino, 40.0, 123).unwrap();
        assert!(a.data.iter().zip(&b.data).all(|(x, y)| x.to_bits() == y.to_bits()));
        assert!(a.data != sino.data);
    }

    #[test]
    fn realized_snr_close_to_target() {
        let geom = build_geometry(&ScanConfig {
            image_size: 64,
            position_jitter_frac: 0.0,
            ..ScanConfig::default()
        })
        .unwrap();
        let sino = simulate_sinogram(&random_image(64, 9), &geom).unwrap();
        assert!(sino.data.len() >= 36 * 1024);
        let noisy = add_noise(&sino, 50.0, 7).unwrap();
        let noise_power = sino
            .data
            .iter()
            .zip(&noisy.data)
            .map(|(c, n)| (n - c) * (n - c))
            .sum::<f64>()
            / sino.data.len() as f64;
        let realized = 10.0 * (sino.mean_power() / noise_power).log10();
        assert!((realized - 50.0).abs() <= 0.5, "realized SNR {realized} dB");
    }

    #[test]
    fn all_zero_sinogram_noise_rejected() {
        let geom = small_geom(16, 4);
        assert!(matches!(
            add_noise(&Sinogram::zeros_like(&geom), 50.0, 0),
            Err(CoreError::InvalidInput(_))
        ));
    }

    #[test]
    fn translation_shifts_deposit_centroids_as_predicted() {
        let geom = small_geom(32, 12);
        let center = |row: &[f64]| -> f64 {
            let total: f64 = row.iter().sum();
            row.iter().enumerate().map(|(k, v)| k as f64 * v).sum::<f64>() / total
        };
        let mut a = Image::zeros(32, 32);
        a.set(16, 16, 1.0);
        let mut b = Image::zeros(32, 32);
        b.set(16, 17, 1.0); // one pixel to the right
        let sa = deposit(a.data(), &geom).unwrap();
        let sb = deposit(b.data(), &geom).unwrap();
        let ia = 16 * 32 + 16;
        let ib = 16 * 32 + 17;
        for d in 0..geom.n_detectors() {
            let predicted = geom.sample_index(d, geom.pixel_xy[ib][0], geom.pixel_xy[ib][1])
                - geom.sample_index(d, geom.pixel_xy[ia][0], geom.pixel_xy[ia][1]);
            let measured = center(sb.row(d)) - center(sa.row(d));
            assert!(
                (measured - predicted).abs() <= 0.6,
                "detector {d}: measured {measured}, predicted {predicted}"
            );
        }
    }

    #[test]
    fn amplitude_decays_with_ring_radius() {
        // Deposit weight goes as 1/tau, so doubling the radius for a centered
        // source halves the deposited amplitude.
        let base = ScanConfig {
            image_size: 16,
            position_jitter_frac: 0.0,
            ..ScanConfig::default()
        };
        let far = ScanConfig {
            ring_radius: 0.088,
            n_samples: 2048,
            ..base.clone()
        };
        let g1 = build_geometry(&base).unwrap();
        let g2 = build_geometry(&far).unwrap();
        let mut img = Image::zeros(16, 16);
        img.set(8, 8, 1.0);
        let s1 = deposit(img.data(), &g1).unwrap();
        let s2 = deposit(img.data(), &g2).unwrap();
        let sum1: f64 = s1.row(0).iter().sum();
        let sum2: f64 = s2.row(0).iter().sum();
        let ratio = sum2 / sum1;
        assert!((ratio - 0.5).abs() / 0.5 <= 0.05, "ratio {ratio}");
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let geom = small_geom(16, 4);
        assert!(simulate_sinogram(&Image::zeros(8, 8), &geom).is_err());
        let other = small_geom(16, 6);
        let sino = Sinogram::zeros_like(&other);
        assert!(apply_adjoint(&sino, &geom).is_err());
    }
}
