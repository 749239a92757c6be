//! Deterministic synthetic test images: cosine gratings, two-level random
//! fields, and roughness-controlled fractal surfaces.
//!
//! Randomness comes from SplitMix64 (Steele et al., the `splittable`
//! finalizer used by `java.util.SplittableRandom`), implemented here so
//! the byte-level output is pinned and identical on every platform.
//! Two-level fields take the top bit of each draw; fractal surfaces draw
//! two 53-bit uniforms per spectral bin and convert them with the
//! Box-Muller transform, scanning bins row-major with the DC bin skipped.

use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::image::GrayImage;

/// Parameters of a synthetic image.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PhantomSpec {
    /// Horizontal cosine grating: pixel(i, j) = offset + round(amplitude
    /// * cos(2 pi j / period)), identical rows.
    Grating {
        width: usize,
        height: usize,
        period: usize,
        amplitude: u8,
        offset: u8,
    },
    /// Each pixel independently 0 or 255 with probability 1/2.
    TwoLevel {
        width: usize,
        height: usize,
        seed: u64,
    },
    /// Spectral synthesis with power ~ (kx^2 + ky^2)^-(H+1), zero DC,
    /// affinely rescaled to span [0, 255].
    Fractal {
        width: usize,
        height: usize,
        hurst: f64,
        seed: u64,
    },
}

impl PhantomSpec {
    pub fn generate(&self) -> Result<GrayImage> {
        match *self {
            PhantomSpec::Grating {
                width,
                height,
                period,
                amplitude,
                offset,
            } => make_grating(width, height, period, amplitude, offset),
            PhantomSpec::TwoLevel {
                width,
                height,
                seed,
            } => make_two_level(width, height, seed),
            PhantomSpec::Fractal {
                width,
                height,
                hurst,
                seed,
            } => make_fractal(width, height, hurst, seed),
        }
    }
}

/// SplitMix64 step: advances the state and returns the next value.
pub fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E3779B97F4A7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Uniform in (0, 1]: 53 high bits, offset by one ulp to exclude zero.
fn uniform_open(state: &mut u64) -> f64 {
    ((splitmix64(state) >> 11) + 1) as f64 / (1u64 << 53) as f64
}

pub fn make_grating(
    width: usize,
    height: usize,
    period: usize,
    amplitude: u8,
    offset: u8,
) -> Result<GrayImage> {
    if width == 0 || height == 0 || period == 0 {
        return Err(Error::InvalidPhantom("dimensions and period must be positive".into()));
    }
    if !width.is_multiple_of(period) {
        return Err(Error::InvalidPhantom(format!(
            "period {period} does not divide width {width}"
        )));
    }
    if amplitude > 127 {
        return Err(Error::InvalidPhantom(format!(
            "amplitude {amplitude} exceeds 127"
        )));
    }
    let (off, amp) = (offset as i32, amplitude as i32);
    if off - amp < 0 || off + amp > 255 {
        return Err(Error::InvalidPhantom(format!(
            "offset {off} +/- amplitude {amp} leaves [0, 255]"
        )));
    }
    let row: Vec<u8> = (0..width)
        .map(|j| {
            let phase = 2.0 * std::f64::consts::PI * j as f64 / period as f64;
            (off as f64 + (amplitude as f64 * phase.cos()).round()) as u8
        })
        .collect();
    let mut pixels = Vec::with_capacity(width * height);
    for _ in 0..height {
        pixels.extend_from_slice(&row);
    }
    GrayImage::new(width, height, pixels)
}

pub fn make_two_level(width: usize, height: usize, seed: u64) -> Result<GrayImage> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidPhantom("dimensions must be positive".into()));
    }
    let mut state = seed;
    let pixels = (0..width * height)
        .map(|_| if splitmix64(&mut state) >> 63 == 1 { 255 } else { 0 })
        .collect();
    GrayImage::new(width, height, pixels)
}

pub fn make_fractal(width: usize, height: usize, hurst: f64, seed: u64) -> Result<GrayImage> {
    if !width.is_power_of_two() || !height.is_power_of_two() {
        return Err(Error::InvalidPhantom(format!(
            "dimensions must be powers of two, got {width}x{height}"
        )));
    }
    if !(hurst > 0.0 && hurst < 1.0) {
        return Err(Error::InvalidPhantom(format!(
            "hurst exponent {hurst} outside (0, 1)"
        )));
    }
    let mut state = seed;
    let mut field = vec![Complex64::new(0.0, 0.0); width * height];
    let exponent = -(hurst + 1.0) / 2.0; // amplitude exponent: power is -(H+1)
    for ky in 0..height {
        for kx in 0..width {
            if kx == 0 && ky == 0 {
                continue; // zero DC
            }
            let u1 = uniform_open(&mut state);
            let u2 = uniform_open(&mut state);
            let fx = kx.min(width - kx) as f64;
            let fy = ky.min(height - ky) as f64;
            let mag = (fx * fx + fy * fy).powf(exponent);
            let r = (-2.0 * u1.ln()).sqrt();
            let ang = 2.0 * std::f64::consts::PI * u2;
            field[ky * width + kx] =
                Complex64::new(r * ang.cos(), r * ang.sin()) * mag;
        }
    }

    // inverse 2-D FFT, rows then columns; scale is irrelevant before rescaling
    let mut planner = FftPlanner::new();
    let row_fft = planner.plan_fft(width, FftDirection::Inverse);
    for ky in 0..height {
        row_fft.process(&mut field[ky * width..(ky + 1) * width]);
    }
    let col_fft = planner.plan_fft(height, FftDirection::Inverse);
    let mut col = vec![Complex64::new(0.0, 0.0); height];
    for kx in 0..width {
        for ky in 0..height {
            col[ky] = field[ky * width + kx];
        }
        col_fft.process(&mut col);
        for ky in 0..height {
            field[ky * width + kx] = col[ky];
        }
    }

    let real: Vec<f64> = field.iter().map(|c| c.re).collect();
    let min = real.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = real.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let span = max - min;
    let pixels = if span == 0.0 {
        vec![0u8; width * height]
    } else {
        real.iter()
            .map(|&v| (255.0 * (v - min) / span).round() as u8)
            .collect()
    };
    GrayImage::new(width, height, pixels)
}
