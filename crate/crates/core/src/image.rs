//! 8-bit grayscale rasters and the 1-D signals they unfold into.

use crate::error::{Error, Result};

/// An 8-bit grayscale image, pixels stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!(
                "dimensions must be positive, got {width}x{height}"
            )));
        }
        if pixels.len() != width * height {
            return Err(Error::InvalidImage(format!(
                "pixel count {} does not match {width}x{height}",
                pixels.len()
            )));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    /// Builds an image by evaluating `f(row, col)` at every pixel.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> u8) -> Self {
        let mut pixels = Vec::with_capacity(width * height);
        for i in 0..height {
            for j in 0..width {
                pixels.push(f(i, j));
            }
        }
        Self {
            width,
            height,
            pixels,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn pixel(&self, row: usize, col: usize) -> u8 {
        self.pixels[row * self.width + col]
    }

    pub fn row(&self, row: usize) -> &[u8] {
        &self.pixels[row * self.width..(row + 1) * self.width]
    }

    /// True when every pixel has the same intensity.
    pub fn is_constant(&self) -> bool {
        self.pixels.windows(2).all(|w| w[0] == w[1])
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }
}

/// A finite real-valued sample sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    samples: Vec<f64>,
}

impl Signal {
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidSignal("empty sample sequence".into()));
        }
        if let Some(pos) = samples.iter().position(|s| !s.is_finite()) {
            return Err(Error::InvalidSignal(format!(
                "non-finite sample at index {pos}"
            )));
        }
        Ok(Self { samples })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.samples.len() as f64
    }

    /// Same samples with the mean subtracted.
    pub fn mean_removed(&self) -> Signal {
        let m = self.mean();
        Signal {
            samples: self.samples.iter().map(|s| s - m).collect(),
        }
    }

    /// Samples divided by 255, mapping 8-bit intensities onto [0, 1].
    pub fn normalized(&self) -> Signal {
        Signal {
            samples: self.samples.iter().map(|s| s / 255.0).collect(),
        }
    }
}

/// Flattens an image into one row-major signal.
pub fn unfold_raster(image: &GrayImage) -> Signal {
    Signal {
        samples: image.pixels().iter().map(|&p| p as f64).collect(),
    }
}

/// Splits an image into one horizontal signal per row.
pub fn unfold_rows(image: &GrayImage) -> Result<Vec<Signal>> {
    if image.width() < 2 {
        return Err(Error::RowTooShort {
            width: image.width(),
        });
    }
    Ok((0..image.height())
        .map(|i| Signal {
            samples: image.row(i).iter().map(|&p| p as f64).collect(),
        })
        .collect())
}
