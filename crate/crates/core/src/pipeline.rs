//! End-to-end analysis: enhancement, unfolding, per-row S-transform,
//! amplitude aggregation, and the dominant-voice peak statistic.

use serde::Serialize;

use crate::enhance::{equalize_bhe, equalize_global, equalize_hkmdhe_with};
use crate::error::{Error, Result};
use crate::image::{unfold_raster, unfold_rows, GrayImage, Signal};
use crate::metrics::{compute_moments_with, quality_report_with, BetaNormalization, MomentSummary, QualityReport};
use crate::stransform::{amplitude, st_forward, AmplitudeSpectrum};

/// Largest pixel count accepted in raster mode (the full spectrum is
/// N x N complex).
pub const RASTER_PIXEL_LIMIT: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum UnfoldMode {
    #[default]
    Rows,
    Raster,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Enhancement {
    #[default]
    Hkmdhe,
    Bhe,
    Global,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PipelineConfig {
    pub unfold_mode: UnfoldMode,
    pub mean_removal: bool,
    pub enhancement: Enhancement,
    pub beta_normalization: BetaNormalization,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            unfold_mode: UnfoldMode::Rows,
            mean_removal: true,
            enhancement: Enhancement::Hkmdhe,
            beta_normalization: BetaNormalization::Sigma,
        }
    }
}

/// Analysis outcome; mirrors the stable JSON report schema.
#[derive(Debug, Clone, Serialize)]
pub struct PipelineReport {
    /// Non-DC voice with the largest time-averaged aggregated amplitude,
    /// in cycles per row record; absent for degenerate images.
    pub dominant_voice: Option<usize>,
    /// Max over tau of the aggregated amplitude at the dominant voice.
    pub peak_amplitude: Option<f64>,
    pub per_voice_mean_amplitude: Vec<f64>,
    pub per_row_peak_mean: Option<f64>,
    pub per_row_peak_std: Option<f64>,
    pub quality: QualityReport,
    pub moments: MomentSummary,
    pub config: PipelineConfig,
    pub warnings: Vec<String>,
}

/// Aggregated amplitude matrix alongside the report, for CSV export.
pub struct Analysis {
    pub report: PipelineReport,
    pub aggregate: AmplitudeSpectrum,
    pub enhanced: GrayImage,
}

fn prepare(signal: &Signal, mean_removal: bool) -> Signal {
    let s = signal.normalized();
    if mean_removal {
        s.mean_removed()
    } else {
        s
    }
}

pub fn analyze(image: &GrayImage, config: &PipelineConfig) -> Result<Analysis> {
    if config.unfold_mode == UnfoldMode::Rows && image.width() < 4 {
        return Err(Error::ImageTooNarrow {
            width: image.width(),
        });
    }
    if config.unfold_mode == UnfoldMode::Raster {
        let pixels = image.width() * image.height();
        if pixels > RASTER_PIXEL_LIMIT {
            return Err(Error::RasterSizeLimit {
                pixels,
                limit: RASTER_PIXEL_LIMIT,
            });
        }
    }

    let mut warnings = Vec::new();
    let moments = compute_moments_with(image, config.beta_normalization);

    let enhanced = match config.enhancement {
        Enhancement::Hkmdhe => {
            let (eq, _) = equalize_hkmdhe_with(image, config.beta_normalization);
            if eq.degenerate {
                warnings.push("degenerate histogram: equalizer fell back to identity".into());
            }
            eq.image
        }
        Enhancement::Bhe => {
            let eq = equalize_bhe(image);
            if eq.degenerate {
                warnings.push("degenerate histogram: equalizer fell back to identity".into());
            }
            eq.image
        }
        Enhancement::Global => {
            let eq = equalize_global(image);
            if eq.degenerate {
                warnings.push("degenerate histogram: equalizer fell back to identity".into());
            }
            eq.image
        }
        Enhancement::None => image.clone(),
    };

    let quality = quality_report_with(image, &enhanced, config.beta_normalization)?;
    let constant = enhanced.is_constant();

    let (aggregate, row_spectra) = match config.unfold_mode {
        UnfoldMode::Rows => {
            let rows = unfold_rows(&enhanced)?;
            let mut spectra = Vec::with_capacity(rows.len());
            for row in &rows {
                spectra.push(amplitude(&st_forward(&prepare(row, config.mean_removal))?));
            }
            (AmplitudeSpectrum::mean_of(&spectra), Some(spectra))
        }
        UnfoldMode::Raster => {
            let signal = prepare(&unfold_raster(&enhanced), config.mean_removal);
            (amplitude(&st_forward(&signal)?), None)
        }
    };

    let per_voice_mean_amplitude = aggregate.time_mean_per_voice();

    let (dominant_voice, peak_amplitude, per_row_peak_mean, per_row_peak_std) = if constant {
        warnings.push("degenerate image: constant after enhancement, no dominant voice".into());
        (None, None, None, None)
    } else {
        // ties go to the smallest voice index; DC excluded
        let dominant = per_voice_mean_amplitude
            .iter()
            .enumerate()
            .skip(1)
            .fold(None::<(usize, f64)>, |best, (v, &a)| match best {
                Some((_, ba)) if ba >= a => best,
                _ => Some((v, a)),
            })
            .map(|(v, _)| v)
            .expect("width >= 2 guarantees a non-DC voice");
        let peak = aggregate.peak_at_voice(dominant);
        let (mean, std) = match &row_spectra {
            Some(spectra) => {
                let peaks: Vec<f64> =
                    spectra.iter().map(|s| s.peak_at_voice(dominant)).collect();
                let m = peaks.iter().sum::<f64>() / peaks.len() as f64;
                let var =
                    peaks.iter().map(|p| (p - m) * (p - m)).sum::<f64>() / peaks.len() as f64;
                (Some(m), Some(var.sqrt()))
            }
            None => (None, None),
        };
        (Some(dominant), Some(peak), mean, std)
    };

    Ok(Analysis {
        report: PipelineReport {
            dominant_voice,
            peak_amplitude,
            per_voice_mean_amplitude,
            per_row_peak_mean,
            per_row_peak_std,
            quality,
            moments,
            config: *config,
            warnings,
        },
        aggregate,
        enhanced,
    })
}

impl AmplitudeSpectrum {
    /// Entrywise mean of equally sized amplitude matrices.
    pub fn mean_of(spectra: &[AmplitudeSpectrum]) -> AmplitudeSpectrum {
        assert!(!spectra.is_empty());
        let n = spectra[0].len();
        let mut acc = vec![0.0; n * n];
        for s in spectra {
            assert_eq!(s.len(), n);
            for (a, &m) in acc.iter_mut().zip(s.magnitudes()) {
                *a += m;
            }
        }
        let count = spectra.len() as f64;
        for a in acc.iter_mut() {
            *a /= count;
        }
        AmplitudeSpectrum::from_magnitudes(n, acc)
    }
}

/// One line of a grade-comparison table.
#[derive(Debug, Clone, Serialize)]
pub struct ComparisonEntry {
    pub label: String,
    pub peak_amplitude: Option<f64>,
    pub dominant_voice: Option<usize>,
}

/// Orders labelled reports by peak amplitude (ascending; ties stay in
/// label order, reports without a peak sort last) and lists the pairwise
/// ordering.
#[derive(Debug, Clone, Serialize)]
pub struct GradeComparison {
    pub entries: Vec<ComparisonEntry>,
    pub pairwise: Vec<String>,
}

pub fn compare_grades(reports: &[(String, PipelineReport)]) -> Result<GradeComparison> {
    if reports.len() < 2 {
        return Err(Error::TooFewReports(reports.len()));
    }
    let mut entries: Vec<ComparisonEntry> = reports
        .iter()
        .map(|(label, r)| ComparisonEntry {
            label: label.clone(),
            peak_amplitude: r.peak_amplitude,
            dominant_voice: r.dominant_voice,
        })
        .collect();
    entries.sort_by(|a, b| match (a.peak_amplitude, b.peak_amplitude) {
        (Some(x), Some(y)) => x.total_cmp(&y).then_with(|| a.label.cmp(&b.label)),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => a.label.cmp(&b.label),
    });
    let pairwise = entries
        .windows(2)
        .map(|w| match (w[0].peak_amplitude, w[1].peak_amplitude) {
            (Some(x), Some(y)) if x == y => format!("{} == {}", w[0].label, w[1].label),
            _ => format!("{} <= {}", w[0].label, w[1].label),
        })
        .collect();
    Ok(GradeComparison { entries, pairwise })
}
