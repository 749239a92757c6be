use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed PGM header at byte {offset}: {detail}")]
    PgmMalformedHeader { offset: usize, detail: String },

    #[error("unsupported maxval {maxval} at byte {offset} (only 255 is supported)")]
    PgmUnsupportedMaxval { offset: usize, maxval: u64 },

    #[error("truncated PGM payload at byte {offset}: expected {expected} bytes, found {found}")]
    PgmTruncatedPayload {
        offset: usize,
        expected: usize,
        found: usize,
    },

    #[error("invalid image: {0}")]
    InvalidImage(String),

    #[error("invalid signal: {0}")]
    InvalidSignal(String),

    #[error("dimension mismatch: reference is {ref_width}x{ref_height}, test is {test_width}x{test_height}")]
    DimensionMismatch {
        ref_width: usize,
        ref_height: usize,
        test_width: usize,
        test_height: usize,
    },

    #[error("zero-signal test image (max intensity 0 with nonzero error)")]
    ZeroSignalTestImage,

    #[error("row too short for spectral analysis (width {width} < 2)")]
    RowTooShort { width: usize },

    #[error("signal too short for S-transform (length {len} < 2)")]
    SignalTooShort { len: usize },

    #[error("non-physical spectrum: {0}")]
    NonPhysicalSpectrum(String),

    #[error("invalid phantom parameters: {0}")]
    InvalidPhantom(String),

    #[error("image width {width} < 4 required for row-wise analysis")]
    ImageTooNarrow { width: usize },

    #[error("raster mode size limit: {pixels} pixels exceeds {limit}")]
    RasterSizeLimit { pixels: usize, limit: usize },

    #[error("need at least two labelled reports to compare, got {0}")]
    TooFewReports(usize),

    #[error("malformed signal CSV at line {line}: {detail}")]
    MalformedCsv { line: usize, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;
