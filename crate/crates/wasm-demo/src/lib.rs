//! Browser demo bindings: generate a phantom, enhance it, and run the
//! full analysis, all in-page. See `www/index.html` for the UI.

use wasm_bindgen::prelude::*;

use hkst_core::enhance::{equalize_bhe, equalize_global, equalize_hkmdhe};
use hkst_core::image::GrayImage;
use hkst_core::jsonfmt::to_json;
use hkst_core::phantom::PhantomSpec;
use hkst_core::pipeline::{analyze, Enhancement, PipelineConfig, UnfoldMode};

fn err_to_js(e: hkst_core::Error) -> String {
    e.to_string()
}

fn image_from_parts(pixels: &[u8], width: usize, height: usize) -> Result<GrayImage, String> {
    GrayImage::new(width, height, pixels.to_vec()).map_err(err_to_js)
}

/// Generates a phantom and returns its row-major grayscale bytes.
/// `kind` is one of "grating", "two-level", "fractal"; parameters that do
/// not apply to the chosen kind are ignored.
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn phantom_pixels(
    kind: &str,
    width: usize,
    height: usize,
    period: usize,
    amplitude: u8,
    offset: u8,
    hurst: f64,
    seed: u64,
) -> Result<Vec<u8>, String> {
    let spec = match kind {
        "grating" => PhantomSpec::Grating {
            width,
            height,
            period,
            amplitude,
            offset,
        },
        "two-level" => PhantomSpec::TwoLevel {
            width,
            height,
            seed,
        },
        "fractal" => PhantomSpec::Fractal {
            width,
            height,
            hurst,
            seed,
        },
        other => return Err(format!("unknown phantom kind '{other}'")),
    };
    Ok(spec.generate().map_err(err_to_js)?.into_pixels())
}

/// Enhancement result handed back to JavaScript.
#[wasm_bindgen]
pub struct EnhancedImage {
    pixels: Vec<u8>,
    lut: Vec<u8>,
    split_point: Option<u8>,
    report_json: String,
}

#[wasm_bindgen]
impl EnhancedImage {
    #[wasm_bindgen(getter)]
    pub fn pixels(&self) -> Vec<u8> {
        self.pixels.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn lut(&self) -> Vec<u8> {
        self.lut.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn split_point(&self) -> Option<u8> {
        self.split_point
    }

    /// Moments and quality metrics as a JSON string.
    #[wasm_bindgen(getter)]
    pub fn report_json(&self) -> String {
        self.report_json.clone()
    }
}

/// Applies one of the equalizers ("hkmdhe", "bhe", "global") to raw
/// grayscale bytes.
#[wasm_bindgen]
pub fn enhance_pixels(
    pixels: &[u8],
    width: usize,
    height: usize,
    method: &str,
) -> Result<EnhancedImage, String> {
    let input = image_from_parts(pixels, width, height)?;
    let eq = match method {
        "hkmdhe" => equalize_hkmdhe(&input).0,
        "bhe" => equalize_bhe(&input),
        "global" => equalize_global(&input),
        other => return Err(format!("unknown method '{other}'")),
    };
    let quality = hkst_core::metrics::quality_report(&input, &eq.image).map_err(err_to_js)?;
    let moments = hkst_core::metrics::compute_moments(&input);
    #[derive(serde::Serialize)]
    struct Report {
        quality: hkst_core::metrics::QualityReport,
        moments: hkst_core::metrics::MomentSummary,
        degenerate: bool,
    }
    let report_json = to_json(&Report {
        quality,
        moments,
        degenerate: eq.degenerate,
    });
    Ok(EnhancedImage {
        pixels: eq.image.into_pixels(),
        lut: eq.map.lut,
        split_point: eq.map.split_point,
        report_json,
    })
}

/// Runs the full pipeline and returns the report JSON plus the aggregated
/// amplitude matrix for rendering.
#[wasm_bindgen]
pub struct AnalysisResult {
    report_json: String,
    amplitudes: Vec<f64>,
    n: usize,
}

#[wasm_bindgen]
impl AnalysisResult {
    #[wasm_bindgen(getter)]
    pub fn report_json(&self) -> String {
        self.report_json.clone()
    }

    /// Row-major N x N aggregated amplitude matrix, [tau * n + voice].
    #[wasm_bindgen(getter)]
    pub fn amplitudes(&self) -> Vec<f64> {
        self.amplitudes.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn n(&self) -> usize {
        self.n
    }
}

#[wasm_bindgen]
pub fn analyze_pixels(
    pixels: &[u8],
    width: usize,
    height: usize,
    enhancement: &str,
) -> Result<AnalysisResult, String> {
    let input = image_from_parts(pixels, width, height)?;
    let config = PipelineConfig {
        unfold_mode: UnfoldMode::Rows,
        mean_removal: true,
        enhancement: match enhancement {
            "hkmdhe" => Enhancement::Hkmdhe,
            "bhe" => Enhancement::Bhe,
            "global" => Enhancement::Global,
            "none" => Enhancement::None,
            other => return Err(format!("unknown enhancement '{other}'")),
        },
        beta_normalization: Default::default(),
    };
    let analysis = analyze(&input, &config).map_err(err_to_js)?;
    let n = analysis.aggregate.len();
    Ok(AnalysisResult {
        report_json: to_json(&analysis.report),
        amplitudes: analysis.aggregate.magnitudes().to_vec(),
        n,
    })
}
