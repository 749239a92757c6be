//! CSV formats: 1-D signals (`index,value`) and spectra
//! (`tau,voice,re,im,abs`). Floats are written with 13 significant digits.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::image::Signal;
use crate::stransform::{AmplitudeSpectrum, STSpectrum};

fn fmt(value: f64) -> String {
    format!("{value:.12e}")
}

pub fn write_signal_csv(signal: &Signal) -> String {
    let mut out = String::from("index,value\n");
    for (i, &s) in signal.samples().iter().enumerate() {
        let _ = writeln!(out, "{i},{}", fmt(s));
    }
    out
}

pub fn read_signal_csv(text: &str) -> Result<Signal> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == "index,value" => {}
        Some((_, header)) => {
            return Err(Error::MalformedCsv {
                line: 1,
                detail: format!("expected header 'index,value', got '{}'", header.trim()),
            })
        }
        None => {
            return Err(Error::MalformedCsv {
                line: 1,
                detail: "empty file".into(),
            })
        }
    }
    let mut samples = Vec::new();
    for (idx, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let value = line
            .split(',')
            .nth(1)
            .ok_or_else(|| Error::MalformedCsv {
                line: idx + 1,
                detail: "missing value column".into(),
            })?
            .trim();
        let parsed: f64 = value.parse().map_err(|_| Error::MalformedCsv {
            line: idx + 1,
            detail: format!("unparseable value '{value}'"),
        })?;
        samples.push(parsed);
    }
    if samples.is_empty() {
        return Err(Error::MalformedCsv {
            line: 1,
            detail: "no samples".into(),
        });
    }
    Signal::new(samples)
}

pub fn write_spectrum_csv(spectrum: &STSpectrum) -> String {
    let n = spectrum.len();
    let mut out = String::from("tau,voice,re,im,abs\n");
    for tau in 0..n {
        for voice in 0..n {
            let c = spectrum.get(tau, voice);
            let _ = writeln!(
                out,
                "{tau},{voice},{},{},{}",
                fmt(c.re),
                fmt(c.im),
                fmt(c.norm())
            );
        }
    }
    out
}

/// Aggregated amplitudes use the same layout with re = the amplitude and
/// im = 0.
pub fn write_amplitude_csv(spectrum: &AmplitudeSpectrum) -> String {
    let n = spectrum.len();
    let mut out = String::from("tau,voice,re,im,abs\n");
    for tau in 0..n {
        for voice in 0..n {
            let a = spectrum.get(tau, voice);
            let _ = writeln!(out, "{tau},{voice},{},{},{}", fmt(a), fmt(0.0), fmt(a));
        }
    }
    out
}
