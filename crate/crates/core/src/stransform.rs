//! Discrete Stockwell transform.
//!
//! Conventions, fixed once for the whole crate:
//! - the forward DFT carries the 1/N factor, X[n] = (1/N) sum_k x[k] w^-nk,
//!   so voice 0 of the transform is the signal mean;
//! - voices n = 0..N-1 are interpreted over the centered alias range: the
//!   Gaussian width of voice n uses nu = n for n <= N/2 and nu = n - N
//!   otherwise, and the window sum index m runs over -floor(N/2) <= m <
//!   ceil(N/2). This keeps the window symmetric around each voice and makes
//!   a constant signal leak at most exp(-2 pi^2) into any non-DC voice.
//!
//! `st_forward` is the FFT-accelerated path (one FFT of the signal plus one
//! inverse FFT per voice). `st_direct_freq` evaluates the identical formula
//! term by term and serves as its oracle. `st_direct_time` evaluates the
//! time-domain Gaussian-times-phase kernel; it agrees with the frequency
//! path only up to the aliasing error of the sampled Gaussian, so tests
//! compare the two in a validated voice band only.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::error::{Error, Result};
use crate::image::Signal;

/// Complex time-frequency matrix S[tau, voice], N x N.
#[derive(Debug, Clone, PartialEq)]
pub struct STSpectrum {
    n: usize,
    values: Vec<Complex64>, // row-major: [tau * n + voice]
}

impl STSpectrum {
    pub fn from_values(n: usize, values: Vec<Complex64>) -> Result<Self> {
        if n < 2 || values.len() != n * n {
            return Err(Error::NonPhysicalSpectrum(format!(
                "expected {n}x{n} values, got {}",
                values.len()
            )));
        }
        Ok(Self { n, values })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, tau: usize, voice: usize) -> Complex64 {
        self.values[tau * self.n + voice]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Time marginal (1/N) sum_tau S[tau, n]; equals the 1/N-normalized
    /// DFT of the original signal.
    pub fn time_marginal(&self) -> Vec<Complex64> {
        let n = self.n;
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for tau in 0..n {
            for (o, v) in out.iter_mut().zip(&self.values[tau * n..(tau + 1) * n]) {
                *o += v;
            }
        }
        for v in out.iter_mut() {
            *v /= n as f64;
        }
        out
    }
}

/// Entrywise magnitudes |S[tau, voice]|.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeSpectrum {
    n: usize,
    magnitudes: Vec<f64>,
}

impl AmplitudeSpectrum {
    pub fn from_magnitudes(n: usize, magnitudes: Vec<f64>) -> AmplitudeSpectrum {
        assert_eq!(magnitudes.len(), n * n);
        AmplitudeSpectrum { n, magnitudes }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, tau: usize, voice: usize) -> f64 {
        self.magnitudes[tau * self.n + voice]
    }

    pub fn magnitudes(&self) -> &[f64] {
        &self.magnitudes
    }

    /// Mean over tau for each voice.
    pub fn time_mean_per_voice(&self) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n];
        for tau in 0..n {
            for (o, v) in out.iter_mut().zip(&self.magnitudes[tau * n..(tau + 1) * n]) {
                *o += v;
            }
        }
        for v in out.iter_mut() {
            *v /= n as f64;
        }
        out
    }

    /// Max over tau at one voice.
    pub fn peak_at_voice(&self, voice: usize) -> f64 {
        (0..self.n)
            .map(|tau| self.magnitudes[tau * self.n + voice])
            .fold(0.0, f64::max)
    }
}

pub fn amplitude(spectrum: &STSpectrum) -> AmplitudeSpectrum {
    AmplitudeSpectrum {
        n: spectrum.n,
        magnitudes: spectrum.values.iter().map(|c| c.norm()).collect(),
    }
}

/// Centered alias of voice n: n for n <= N/2, n - N above.
fn alias_voice(n: usize, len: usize) -> i64 {
    if n <= len / 2 {
        n as i64
    } else {
        n as i64 - len as i64
    }
}

fn check_len(signal: &Signal) -> Result<usize> {
    let n = signal.len();
    if n < 2 {
        return Err(Error::SignalTooShort { len: n });
    }
    Ok(n)
}

fn dft_normalized(samples: &[f64], fft: &Arc<dyn Fft<f64>>) -> Vec<Complex64> {
    let n = samples.len();
    let mut buf: Vec<Complex64> = samples.iter().map(|&s| Complex64::new(s, 0.0)).collect();
    fft.process(&mut buf);
    for v in buf.iter_mut() {
        *v /= n as f64;
    }
    buf
}

/// FFT-accelerated forward S-transform.
pub fn st_forward(signal: &Signal) -> Result<STSpectrum> {
    let n = check_len(signal)?;
    let mut planner = FftPlanner::new();
    let forward = planner.plan_fft(n, FftDirection::Forward);
    let inverse = planner.plan_fft(n, FftDirection::Inverse);
    let spectrum = dft_normalized(signal.samples(), &forward);

    let mut values = vec![Complex64::new(0.0, 0.0); n * n];
    let mean = Complex64::new(signal.mean(), 0.0);
    for tau in 0..n {
        values[tau * n] = mean;
    }

    let m_lo = -((n / 2) as i64);
    let m_hi = n.div_ceil(2) as i64; // exclusive
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for voice in 1..n {
        let nu = alias_voice(voice, n) as f64;
        for v in buf.iter_mut() {
            *v = Complex64::new(0.0, 0.0);
        }
        for m in m_lo..m_hi {
            let idx = (m + voice as i64).rem_euclid(n as i64) as usize;
            let weight = (-2.0 * std::f64::consts::PI.powi(2) * (m * m) as f64 / (nu * nu)).exp();
            buf[m.rem_euclid(n as i64) as usize] = spectrum[idx] * weight;
        }
        // unnormalized inverse FFT realizes sum_m A[m] e^{+i 2 pi m tau / N}
        inverse.process(&mut buf);
        for tau in 0..n {
            values[tau * n + voice] = buf[tau];
        }
    }
    Ok(STSpectrum { n, values })
}

/// O(N^2)-per-voice literal evaluation of the same formula; the FFT
/// path's oracle. Intended for N <= 256.
pub fn st_direct_freq(signal: &Signal) -> Result<STSpectrum> {
    let n = check_len(signal)?;
    let nf = n as f64;
    // naive normalized DFT
    let mut spectrum = vec![Complex64::new(0.0, 0.0); n];
    for (k, item) in spectrum.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &s) in signal.samples().iter().enumerate() {
            let ang = -2.0 * std::f64::consts::PI * (k * j) as f64 / nf;
            acc += s * Complex64::new(ang.cos(), ang.sin());
        }
        *item = acc / nf;
    }

    let mut values = vec![Complex64::new(0.0, 0.0); n * n];
    let mean = Complex64::new(signal.mean(), 0.0);
    for tau in 0..n {
        values[tau * n] = mean;
    }
    let m_lo = -((n / 2) as i64);
    let m_hi = n.div_ceil(2) as i64;
    for voice in 1..n {
        let nu = alias_voice(voice, n) as f64;
        for tau in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for m in m_lo..m_hi {
                let idx = (m + voice as i64).rem_euclid(n as i64) as usize;
                let weight =
                    (-2.0 * std::f64::consts::PI.powi(2) * (m * m) as f64 / (nu * nu)).exp();
                let ang = 2.0 * std::f64::consts::PI * m as f64 * tau as f64 / nf;
                acc += spectrum[idx] * weight * Complex64::new(ang.cos(), ang.sin());
            }
            values[tau * n + voice] = acc;
        }
    }
    Ok(STSpectrum { n, values })
}

/// Time-domain evaluation with the combined Gaussian-times-phase kernel,
/// f_n = n/N cycles per sample and minimal circular distance for the
/// window argument. Agrees with `st_forward` only up to Gaussian aliasing.
pub fn st_direct_time(signal: &Signal) -> Result<STSpectrum> {
    let n = check_len(signal)?;
    let nf = n as f64;
    let mut values = vec![Complex64::new(0.0, 0.0); n * n];
    let mean = Complex64::new(signal.mean(), 0.0);
    for tau in 0..n {
        values[tau * n] = mean;
    }
    let norm = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
    for voice in 1..n {
        let f = voice as f64 / nf;
        for tau in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, &s) in signal.samples().iter().enumerate() {
                let fwd = (tau as i64 - k as i64).rem_euclid(n as i64);
                let dist = fwd.min(n as i64 - fwd) as f64;
                let window = f * norm * (-dist * dist * f * f / 2.0).exp();
                let ang = -2.0 * std::f64::consts::PI * voice as f64 * k as f64 / nf;
                acc += s * window * Complex64::new(ang.cos(), ang.sin());
            }
            values[tau * n + voice] = acc;
        }
    }
    Ok(STSpectrum { n, values })
}

/// Inverse transform through the time-marginal identity. Errors when the
/// spectrum is non-physical: voice 0 is not constant, or the recovered
/// signal has imaginary residue above 1e-9 max-norm (relative to the
/// larger of 1 and the signal's own max-norm).
pub fn st_inverse(spectrum: &STSpectrum) -> Result<Signal> {
    let n = spectrum.n;
    let dc = spectrum.get(0, 0);
    let dc_tol = 1e-9 * (1.0 + dc.norm());
    for tau in 1..n {
        if (spectrum.get(tau, 0) - dc).norm() > dc_tol {
            return Err(Error::NonPhysicalSpectrum(format!(
                "voice 0 is not constant (tau {tau} deviates by {:.3e})",
                (spectrum.get(tau, 0) - dc).norm()
            )));
        }
    }
    let mut buf = spectrum.time_marginal();
    for v in buf.iter_mut() {
        *v *= n as f64; // undo the 1/N forward normalization
    }
    let mut planner = FftPlanner::new();
    let inverse = planner.plan_fft(n, FftDirection::Inverse);
    inverse.process(&mut buf);
    for v in buf.iter_mut() {
        *v /= n as f64;
    }
    let max_abs = buf.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let residue = buf.iter().map(|c| c.im.abs()).fold(0.0, f64::max);
    if residue > 1e-9 * max_abs.max(1.0) {
        return Err(Error::NonPhysicalSpectrum(format!(
            "imaginary residue {residue:.3e} above threshold"
        )));
    }
    Signal::new(buf.iter().map(|c| c.re).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn splitmix64(state: &mut u64) -> u64 {
        *state = state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = *state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    pub(crate) fn random_signal(seed: u64, n: usize) -> Signal {
        let mut state = seed;
        Signal::new(
            (0..n)
                .map(|_| (splitmix64(&mut state) >> 11) as f64 / (1u64 << 53) as f64 - 0.5)
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn rejects_short_signals() {
        let s = Signal::new(vec![1.0]).unwrap();
        assert!(matches!(st_forward(&s), Err(Error::SignalTooShort { .. })));
    }

    #[test]
    fn constant_signal_is_dc_only() {
        let c = 3.7;
        for n in [8usize, 16, 64] {
            let s = Signal::new(vec![c; n]).unwrap();
            let st = st_forward(&s).unwrap();
            for tau in 0..n {
                assert!((st.get(tau, 0) - Complex64::new(c, 0.0)).norm() < 1e-12);
                for voice in 1..n {
                    assert!(
                        st.get(tau, voice).norm() <= 3e-9 * c,
                        "N={n} voice={voice} leak {:.3e}",
                        st.get(tau, voice).norm()
                    );
                }
            }
        }
    }

    #[test]
    fn cosine_energy_sits_at_its_voice() {
        let n = 16;
        let s = Signal::new(
            (0..n)
                .map(|k| (2.0 * std::f64::consts::PI * 2.0 * k as f64 / n as f64).cos())
                .collect(),
        )
        .unwrap();
        let st = st_forward(&s).unwrap();
        for tau in 0..n {
            assert!((st.get(tau, 2).norm() - 0.5).abs() < 1e-6);
        }
    }

    #[test]
    fn time_marginal_recovers_dft() {
        let s = random_signal(5, 64);
        let st = st_forward(&s).unwrap();
        let marginal = st.time_marginal();
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft(64, FftDirection::Forward);
        let dft = dft_normalized(s.samples(), &fft);
        let max_x = dft.iter().map(|c| c.norm()).fold(0.0, f64::max);
        for v in 0..64 {
            assert!((marginal[v] - dft[v]).norm() <= 1e-12 * max_x.max(1.0));
        }
    }

    #[test]
    fn direct_freq_matches_fft_path() {
        for (i, &n) in [8usize, 32, 64].iter().enumerate() {
            let s = random_signal(100 + i as u64, n);
            let a = st_forward(&s).unwrap();
            let b = st_direct_freq(&s).unwrap();
            let max_err = a
                .values()
                .iter()
                .zip(b.values())
                .map(|(x, y)| (x - y).norm())
                .fold(0.0, f64::max);
            assert!(max_err <= 1e-9, "N={n} err {max_err:.3e}");
        }
    }

    #[test]
    fn direct_time_agrees_in_validated_band() {
        // cosine at voice 8, N = 256; band 4..=N/8, re-verified tolerance 5e-3
        let n = 256;
        let s = Signal::new(
            (0..n)
                .map(|k| (2.0 * std::f64::consts::PI * 8.0 * k as f64 / n as f64).cos())
                .collect(),
        )
        .unwrap();
        let a = st_forward(&s).unwrap();
        let b = st_direct_time(&s).unwrap();
        for voice in 4..=n / 8 {
            for tau in 0..n {
                let err = (a.get(tau, voice) - b.get(tau, voice)).norm();
                assert!(err <= 5e-3, "voice={voice} err {err:.3e}");
            }
        }
    }

    #[test]
    fn direct_time_voice0_is_mean() {
        let s = Signal::new(vec![2.5; 8]).unwrap();
        let st = st_direct_time(&s).unwrap();
        for tau in 0..8 {
            assert_eq!(st.get(tau, 0), Complex64::new(2.5, 0.0));
        }
    }

    #[test]
    fn round_trip_recovers_signal() {
        let s = random_signal(9, 64);
        let st = st_forward(&s).unwrap();
        let back = st_inverse(&st).unwrap();
        let max_err = s
            .samples()
            .iter()
            .zip(back.samples())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(max_err <= 1e-9);

        let c = Signal::new(vec![4.2; 16]).unwrap();
        let back = st_inverse(&st_forward(&c).unwrap()).unwrap();
        assert!(back.samples().iter().all(|&v| (v - 4.2).abs() < 1e-12));
    }

    #[test]
    fn inverse_rejects_non_constant_voice0() {
        let n = 4;
        let mut values = vec![Complex64::new(0.0, 0.0); n * n];
        values[0] = Complex64::new(1.0, 0.0); // S[0,0] != S[1,0]
        let spec = STSpectrum::from_values(n, values).unwrap();
        assert!(matches!(
            st_inverse(&spec),
            Err(Error::NonPhysicalSpectrum(_))
        ));
    }

    #[test]
    fn amplitude_is_entrywise_magnitude() {
        let n = 4;
        let spec = STSpectrum::from_values(
            n,
            vec![Complex64::new(0.0, 0.0); n * n],
        )
        .unwrap();
        assert!(amplitude(&spec).magnitudes().iter().all(|&m| m == 0.0));

        let s = random_signal(3, 16);
        let st = st_forward(&s).unwrap();
        let amp = amplitude(&st);
        for tau in 0..16 {
            for voice in 0..16 {
                assert_eq!(amp.get(tau, voice), st.get(tau, voice).norm());
            }
        }
    }

    #[test]
    fn shift_covariance_of_magnitudes() {
        let n = 32;
        let s = random_signal(12, n);
        let shift = 5usize;
        let shifted = Signal::new(
            (0..n)
                .map(|k| s.samples()[(k + n - shift) % n])
                .collect(),
        )
        .unwrap();
        let a = amplitude(&st_forward(&s).unwrap());
        let b = amplitude(&st_forward(&shifted).unwrap());
        for tau in 0..n {
            for voice in 0..n {
                let err = (b.get((tau + shift) % n, voice) - a.get(tau, voice)).abs();
                assert!(err <= 1e-9, "tau={tau} voice={voice} err {err:.3e}");
            }
        }
    }

    #[test]
    fn linearity() {
        let n = 32;
        let x = random_signal(21, n);
        let y = random_signal(22, n);
        let (a, b) = (1.3, -0.7);
        let combined = Signal::new(
            x.samples()
                .iter()
                .zip(y.samples())
                .map(|(&u, &v)| a * u + b * v)
                .collect(),
        )
        .unwrap();
        let sc = st_forward(&combined).unwrap();
        let sx = st_forward(&x).unwrap();
        let sy = st_forward(&y).unwrap();
        let max_err = sc
            .values()
            .iter()
            .zip(sx.values().iter().zip(sy.values()))
            .map(|(c, (u, v))| (c - (u * a + v * b)).norm())
            .fold(0.0, f64::max);
        assert!(max_err <= 1e-10, "err {max_err:.3e}");
    }
}
