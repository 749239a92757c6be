//! Intensity-distribution moments and the image-quality metrics
//! RMSE, PSNR, and AMMBE.
//!
//! Moments are computed on intensities normalized to [0, 1] (divided by
//! 255); on the raw 0..255 scale the sixth-central-moment term can exceed
//! the mean by many orders of magnitude and sqrt(m - beta) would be
//! undefined almost everywhere. RMSE and PSNR stay on the raw scale
//! because the PSNR peak is the stored maximum intensity.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::image::GrayImage;

/// Denominator used for the hyper-kurtosis term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum BetaNormalization {
    /// E[(X-m)^6] / sigma, as printed in the source formula.
    #[default]
    Sigma,
    /// E[(X-m)^6] / sigma^6, the standardized sixth moment.
    Sigma6,
}

/// Moment summary of an intensity distribution on the normalized [0, 1] scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentSummary {
    pub mean: f64,
    pub sigma: f64,
    pub excess_kurtosis: f64,
    pub sixth_central_moment: f64,
    pub beta: f64,
    pub modified_mean: f64,
    /// True when mean - beta went negative and was clamped to 0.
    pub clamped: bool,
}

/// Moments with the default (as-printed) beta normalization.
pub fn compute_moments(image: &GrayImage) -> MomentSummary {
    compute_moments_with(image, BetaNormalization::Sigma)
}

pub fn compute_moments_with(image: &GrayImage, norm: BetaNormalization) -> MomentSummary {
    let n = image.pixels().len() as f64;
    let mean = image.pixels().iter().map(|&p| p as f64 / 255.0).sum::<f64>() / n;

    let mut m2 = 0.0;
    let mut m4 = 0.0;
    let mut m6 = 0.0;
    for &p in image.pixels() {
        let d = p as f64 / 255.0 - mean;
        let d2 = d * d;
        m2 += d2;
        m4 += d2 * d2;
        m6 += d2 * d2 * d2;
    }
    m2 /= n;
    m4 /= n;
    m6 /= n;
    let sigma = m2.sqrt();

    if sigma == 0.0 {
        // constant image: the split statistic degenerates to the mean
        return MomentSummary {
            mean,
            sigma: 0.0,
            excess_kurtosis: 0.0,
            sixth_central_moment: 0.0,
            beta: 0.0,
            modified_mean: mean,
            clamped: false,
        };
    }

    let excess_kurtosis = m4 / (m2 * m2) - 3.0;
    let beta = match norm {
        BetaNormalization::Sigma => m6 / sigma,
        BetaNormalization::Sigma6 => m6 / (m2 * m2 * m2),
    };
    let (modified_mean, clamped) = if excess_kurtosis < 0.0 {
        ((mean + beta).sqrt(), false)
    } else {
        let inner = mean - beta;
        (inner.max(0.0).sqrt(), inner < 0.0)
    };
    MomentSummary {
        mean,
        sigma,
        excess_kurtosis,
        sixth_central_moment: m6,
        beta,
        modified_mean: modified_mean.min(1.0),
        clamped,
    }
}

/// Root mean square error on raw 0..255 intensities.
pub fn rmse(reference: &GrayImage, test: &GrayImage) -> Result<f64> {
    check_dims(reference, test)?;
    let n = reference.pixels().len() as f64;
    let sum: f64 = reference
        .pixels()
        .iter()
        .zip(test.pixels())
        .map(|(&x, &y)| {
            let d = x as f64 - y as f64;
            d * d
        })
        .sum();
    Ok((sum / n).sqrt())
}

/// Peak signal-to-noise ratio in dB, with the peak taken as the test
/// image's maximum intensity. `None` means undefined (identical images).
pub fn psnr(reference: &GrayImage, test: &GrayImage) -> Result<Option<f64>> {
    let err = rmse(reference, test)?;
    if err == 0.0 {
        return Ok(None);
    }
    let peak = *test.pixels().iter().max().expect("non-empty image") as f64;
    if peak == 0.0 {
        return Err(Error::ZeroSignalTestImage);
    }
    Ok(Some(20.0 * (peak / err).log10()))
}

/// Absolute modified mean brightness error: |MM(reference) - MM(test)|.
/// Compares distributions, so dimensions may differ.
pub fn ammbe(reference: &GrayImage, test: &GrayImage) -> f64 {
    ammbe_with(reference, test, BetaNormalization::Sigma)
}

pub fn ammbe_with(reference: &GrayImage, test: &GrayImage, norm: BetaNormalization) -> f64 {
    (compute_moments_with(reference, norm).modified_mean
        - compute_moments_with(test, norm).modified_mean)
        .abs()
}

/// The three quality metrics between a reference image and a test image.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QualityReport {
    pub rmse: f64,
    /// `None` serializes as null and means "undefined" (rmse == 0).
    pub psnr_db: Option<f64>,
    pub ammbe: f64,
    pub clamped_mm_reference: bool,
    pub clamped_mm_test: bool,
}

pub fn quality_report(reference: &GrayImage, test: &GrayImage) -> Result<QualityReport> {
    quality_report_with(reference, test, BetaNormalization::Sigma)
}

pub fn quality_report_with(
    reference: &GrayImage,
    test: &GrayImage,
    norm: BetaNormalization,
) -> Result<QualityReport> {
    let rmse = rmse(reference, test)?;
    let psnr_db = psnr(reference, test)?;
    let mm_ref = compute_moments_with(reference, norm);
    let mm_test = compute_moments_with(test, norm);
    Ok(QualityReport {
        rmse,
        psnr_db,
        ammbe: (mm_ref.modified_mean - mm_test.modified_mean).abs(),
        clamped_mm_reference: mm_ref.clamped,
        clamped_mm_test: mm_test.clamped,
    })
}

fn check_dims(reference: &GrayImage, test: &GrayImage) -> Result<()> {
    if reference.width() != test.width() || reference.height() != test.height() {
        return Err(Error::DimensionMismatch {
            ref_width: reference.width(),
            ref_height: reference.height(),
            test_width: test.width(),
            test_height: test.height(),
        });
    }
    Ok(())
}
