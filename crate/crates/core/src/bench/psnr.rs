//! Peak signal-to-noise ratio, `20 log10(MAX sqrt(D) / ||X - Xr||_F)`.

use crate::error::{Error, Result};

/// Peak value of 8-bit images.
pub const MAX_VALUE: f64 = 255.0;

/// Reconstructions whose RMS error is at most this fraction of the peak
/// (PSNR of 240 dB or more) are reported as exact, since round-off in an
/// orthogonal projection leaves errors around 1e-13 of the signal.
pub const EXACT_RMS_FRACTION: f64 = 1e-12;

pub fn psnr(x: &[f64], recon: &[f64], max_value: f64) -> Result<f64> {
    if x.len() != recon.len() {
        return Err(Error::invalid(format!(
            "PSNR arrays differ in size: {} vs {}",
            x.len(),
            recon.len()
        )));
    }
    let sq: f64 = x.iter().zip(recon).map(|(a, b)| (a - b) * (a - b)).sum();
    from_squared_error(sq, x.len(), max_value)
}

/// PSNR from a precomputed squared Frobenius error over `count` entries.
/// Returns `f64::INFINITY` for an exact reconstruction.
pub fn from_squared_error(squared_error: f64, count: usize, max_value: f64) -> Result<f64> {
    if count == 0 {
        return Err(Error::invalid("PSNR of an empty array"));
    }
    let rms = (squared_error / count as f64).sqrt();
    if rms <= max_value * EXACT_RMS_FRACTION {
        return Ok(f64::INFINITY);
    }
    Ok(20.0 * (max_value / rms).log10())
}
