//! Histogram construction and the three equalizers: global HE, mean-split
//! bi-histogram equalization (BHE), and HKMDHE, which splits at the
//! modified mean.
//!
//! All three share one segment equalizer: a segment [lo, hi] of the
//! intensity axis is remapped by its own cdf with cdf-min anchoring,
//! lut[v] = lo + round((hi - lo) * (cdf(v) - cdf_min) / (1 - cdf_min)).
//! A segment whose mass sits in a single bin (or none) is left as the
//! identity on its range. Rounding is half-away-from-zero throughout so
//! golden images stay byte-stable.

use serde::Serialize;

use crate::image::GrayImage;
use crate::metrics::{compute_moments_with, BetaNormalization, MomentSummary};

pub const LEVELS: usize = 256;

/// Per-intensity pixel counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    pub counts: [u64; LEVELS],
}

pub fn histogram(image: &GrayImage) -> Histogram {
    let mut counts = [0u64; LEVELS];
    for &p in image.pixels() {
        counts[p as usize] += 1;
    }
    Histogram { counts }
}

/// A 256-entry intensity remapping.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransferMap {
    pub lut: Vec<u8>,
    /// `None` for global HE; `Some(t)` when intensities v <= t were
    /// equalized onto [0, t] and v > t onto [t+1, 255].
    pub split_point: Option<u8>,
}

impl TransferMap {
    pub fn apply(&self, image: &GrayImage) -> GrayImage {
        GrayImage::new(
            image.width(),
            image.height(),
            image.pixels().iter().map(|&p| self.lut[p as usize]).collect(),
        )
        .expect("dimensions unchanged")
    }
}

/// Result of an equalizer run.
#[derive(Debug, Clone)]
pub struct Equalized {
    pub image: GrayImage,
    pub map: TransferMap,
    /// True when the input histogram was degenerate (single occupied bin)
    /// and the map fell back to the identity.
    pub degenerate: bool,
}

fn round_half_away(x: f64) -> f64 {
    x.round()
}

/// Fills `lut[lo..=hi]` by equalizing that intensity segment onto itself.
/// Returns the number of occupied bins in the segment.
#[allow(clippy::needless_range_loop)]
fn equalize_segment(hist: &Histogram, lut: &mut [u8; LEVELS], lo: usize, hi: usize) -> usize {
    let total: u64 = hist.counts[lo..=hi].iter().sum();
    let occupied = hist.counts[lo..=hi].iter().filter(|&&c| c > 0).count();
    if occupied <= 1 {
        for v in lo..=hi {
            lut[v] = v as u8;
        }
        return occupied;
    }
    // (cdf - cdf_min) / (1 - cdf_min) with cdf = cum / total reduces to the
    // integer ratio (cum - cum_min) / (total - cum_min). Keeping the
    // numerator and denominator as exact integers means the single float
    // division below is correctly rounded, so half-integer rounding ties
    // are resolved deterministically regardless of evaluation order.
    let cum_min = hist.counts[lo..=hi]
        .iter()
        .scan(0u64, |acc, &c| {
            *acc += c;
            Some(*acc)
        })
        .find(|&c| c > 0)
        .expect("occupied segment");
    let span = (hi - lo) as u64;
    let mut cum = 0u64;
    for v in lo..=hi {
        cum += hist.counts[v];
        let scaled = (span * cum.saturating_sub(cum_min)) as f64 / (total - cum_min) as f64;
        lut[v] = (lo as f64 + round_half_away(scaled)) as u8;
    }
    occupied
}

/// Classic global histogram equalization with cdf-min anchoring.
pub fn equalize_global(image: &GrayImage) -> Equalized {
    let hist = histogram(image);
    let mut lut = [0u8; LEVELS];
    let occupied = equalize_segment(&hist, &mut lut, 0, LEVELS - 1);
    let map = TransferMap {
        lut: lut.to_vec(),
        split_point: None,
    };
    Equalized {
        image: map.apply(image),
        map,
        degenerate: occupied <= 1,
    }
}

fn equalize_split(image: &GrayImage, split: u8) -> Equalized {
    let hist = histogram(image);
    let mut lut = [0u8; LEVELS];
    let t = split as usize;
    let lower = equalize_segment(&hist, &mut lut, 0, t);
    let upper = if t + 1 < LEVELS {
        equalize_segment(&hist, &mut lut, t + 1, LEVELS - 1)
    } else {
        0
    };
    let map = TransferMap {
        lut: lut.to_vec(),
        split_point: Some(split),
    };
    Equalized {
        image: map.apply(image),
        map,
        degenerate: lower + upper <= 1,
    }
}

/// Bi-histogram equalization split at the (rounded) mean intensity.
pub fn equalize_bhe(image: &GrayImage) -> Equalized {
    let mean = compute_moments_with(image, BetaNormalization::Sigma).mean;
    let split = round_half_away(255.0 * mean).clamp(0.0, 255.0) as u8;
    equalize_split(image, split)
}

/// Hyper-kurtosis-based modified duo histogram equalization: bi-histogram
/// equalization split at the modified mean, clamped to [1, 254] so both
/// output ranges are non-empty.
pub fn equalize_hkmdhe(image: &GrayImage) -> (Equalized, MomentSummary) {
    equalize_hkmdhe_with(image, BetaNormalization::Sigma)
}

pub fn equalize_hkmdhe_with(
    image: &GrayImage,
    norm: BetaNormalization,
) -> (Equalized, MomentSummary) {
    let moments = compute_moments_with(image, norm);
    let split = round_half_away(255.0 * moments.modified_mean).clamp(1.0, 254.0) as u8;
    (equalize_split(image, split), moments)
}
