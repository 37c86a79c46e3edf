//! Optoacoustic tomography reconstruction toolkit.
//!
//! The pipeline runs: synthetic phantom -> acoustic forward surrogate ->
//! noisy sinogram -> delay-and-sum initial image -> conditional diffusion
//! enhancement, with a direct-regression U-Net baseline and SSIM/PSNR
//! evaluation alongside.

pub mod das;
pub mod error;
pub mod forward;
pub mod geometry;
pub mod image;
pub mod numeric;
pub mod parallel;
pub mod phantom;
pub mod seeding;
pub mod sinogram;

pub use error::{CoreError, Result};
