//! Dominant oscillation frequency of a uniformly sampled complex signal.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralPeak {
    /// Signed angular frequency: a signal e^{iωt} peaks at +ω.
    pub omega: f64,
    /// |FFT| at the peak, normalized by the number of samples.
    pub amplitude: f64,
}

/// Magnitude spectrum of the mean-removed signal, zero-padded to at least
/// 16× its length. Returns (angular frequencies, magnitudes), with negative
/// frequencies in the upper half as usual.
pub fn spectrum(signal: &[Complex64], dt: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if signal.len() < 4 {
        return Err(Error::Domain(format!(
            "spectrum needs at least 4 samples, got {}",
            signal.len()
        )));
    }
    if !(dt > 0.0) {
        return Err(Error::Domain(format!(
            "sample spacing must be positive, got {dt}"
        )));
    }
    let n = signal.len();
    let padded = (16 * n).next_power_of_two();
    let mean = signal.iter().sum::<Complex64>() / n as f64;
    let mut buf: Vec<Complex64> = signal.iter().map(|z| z - mean).collect();
    buf.resize(padded, Complex64::new(0.0, 0.0));
    FftPlanner::new().plan_fft_forward(padded).process(&mut buf);
    // Forward transform uses e^{-iωt}, so bin k picks up e^{+iω_k t}.
    let step = 2.0 * std::f64::consts::PI / (padded as f64 * dt);
    let omegas = (0..padded)
        .map(|k| if k < padded / 2 { k as f64 } else { k as f64 - padded as f64 } * step)
        .collect();
    let mags = buf.iter().map(|z| z.norm() / n as f64).collect();
    Ok((omegas, mags))
}

pub fn dominant_frequency(signal: &[Complex64], dt: f64) -> Result<SpectralPeak> {
    let (omegas, mags) = spectrum(signal, dt)?;
    let (k, &amplitude) = mags
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty spectrum");
    Ok(SpectralPeak {
        omega: omegas[k],
        amplitude,
    })
}

/// Largest |FFT| within `half_width` of `omega`.
pub fn amplitude_near(signal: &[Complex64], dt: f64, omega: f64, half_width: f64) -> Result<f64> {
    let (omegas, mags) = spectrum(signal, dt)?;
    Ok(omegas
        .iter()
        .zip(&mags)
        .filter(|(w, _)| (*w - omega).abs() <= half_width)
        .map(|(_, m)| *m)
        .fold(0.0, f64::max))
}
