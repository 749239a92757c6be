//! Contrast enhancement and time-frequency analysis for 8-bit grayscale
//! images: hyper-kurtosis-based duo histogram equalization (HKMDHE),
//! RMSE/PSNR/AMMBE quality metrics, a discrete Stockwell transform with
//! FFT and direct evaluators, synthetic phantoms, and the end-to-end
//! pipeline that extracts the dominant-voice peak-amplitude statistic.

pub mod csvio;
pub mod enhance;
pub mod error;
pub mod image;
pub mod jsonfmt;
pub mod metrics;
pub mod pgm;
pub mod phantom;
pub mod pipeline;
pub mod stransform;

pub use error::{Error, Result};
pub use image::{GrayImage, Signal};
