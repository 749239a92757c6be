//! `hkst` command-line front-end: enhancement, quality metrics, 1-D
//! S-transform, full pipeline analysis, and phantom generation.
//!
//! Exit codes are a stable contract: 0 success, 2 I/O, 3 shape mismatch,
//! 4 size limits, 64 usage.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use hkst_core::csvio;
use hkst_core::enhance::{equalize_bhe, equalize_global, equalize_hkmdhe_with, Equalized, TransferMap};
use hkst_core::image::GrayImage;
use hkst_core::jsonfmt::to_json;
use hkst_core::metrics::{quality_report_with, BetaNormalization, MomentSummary, QualityReport};
use hkst_core::pgm::{read_pgm, write_pgm};
use hkst_core::phantom::PhantomSpec;
use hkst_core::pipeline::{analyze, Enhancement, PipelineConfig, UnfoldMode};
use hkst_core::stransform::st_forward;
use hkst_core::Error as CoreError;

const EXIT_IO: u8 = 2;
const EXIT_SHAPE: u8 = 3;
const EXIT_SIZE: u8 = 4;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "hkst", version, about = "HKMDHE enhancement and S-transform image analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enhance a PGM image with HKMDHE, BHE, or global HE
    Enhance(EnhanceArgs),
    /// Compute RMSE/PSNR/AMMBE between two PGM images
    Metrics(MetricsArgs),
    /// S-transform of a 1-D signal CSV
    Stx(StxArgs),
    /// Run the full pipeline on a PGM image and report the peak statistic
    Analyze(AnalyzeArgs),
    /// Generate a deterministic synthetic test image
    Phantom(PhantomArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Hkmdhe,
    Bhe,
    Global,
}

#[derive(Clone, Copy, ValueEnum)]
enum EnhancementArg {
    Hkmdhe,
    Bhe,
    Global,
    None,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Rows,
    Raster,
}

#[derive(Clone, Copy, ValueEnum)]
enum BetaNormArg {
    Sigma,
    Sigma6,
}

impl From<BetaNormArg> for BetaNormalization {
    fn from(v: BetaNormArg) -> Self {
        match v {
            BetaNormArg::Sigma => BetaNormalization::Sigma,
            BetaNormArg::Sigma6 => BetaNormalization::Sigma6,
        }
    }
}

#[derive(Args)]
struct EnhanceArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
    #[arg(long, value_enum, default_value = "hkmdhe")]
    method: MethodArg,
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "sigma")]
    beta_normalization: BetaNormArg,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args)]
struct MetricsArgs {
    #[arg(long)]
    reference: PathBuf,
    #[arg(long)]
    test: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "sigma")]
    beta_normalization: BetaNormArg,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args)]
struct StxArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Keep the DC offset instead of subtracting the mean first
    #[arg(long)]
    no_mean_removal: bool,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "rows")]
    mode: ModeArg,
    #[arg(long, value_enum, default_value = "hkmdhe")]
    enhancement: EnhancementArg,
    #[arg(long)]
    no_mean_removal: bool,
    #[arg(long, value_enum, default_value = "sigma")]
    beta_normalization: BetaNormArg,
    /// Report JSON destination (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the aggregated amplitude spectrum as CSV
    #[arg(long)]
    spectrum_csv: Option<PathBuf>,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Grating,
    TwoLevel,
    Fractal,
}

#[derive(Args)]
struct PhantomArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    /// Image dimensions as WxH, e.g. 64x64
    #[arg(long)]
    size: String,
    #[arg(long, default_value = "0")]
    seed: u64,
    #[arg(long)]
    period: Option<usize>,
    #[arg(long)]
    amplitude: Option<u8>,
    #[arg(long)]
    offset: Option<u8>,
    #[arg(long)]
    hurst: Option<f64>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> Self {
        let code = match err {
            CoreError::DimensionMismatch { .. } => EXIT_SHAPE,
            CoreError::RasterSizeLimit { .. } | CoreError::ImageTooNarrow { .. } => EXIT_SIZE,
            CoreError::InvalidPhantom(_) => EXIT_USAGE,
            _ => EXIT_IO,
        };
        CliError::new(code, err.to_string())
    }
}

/// Tracks inputs/outputs for the optional run manifest.
#[derive(Default)]
struct Run {
    inputs: Vec<ManifestInput>,
    outputs: Vec<String>,
}

#[derive(Serialize)]
struct ManifestInput {
    path: String,
    sha256: String,
}

#[derive(Serialize)]
struct RunManifest<'a> {
    tool_version: &'static str,
    command_line: Vec<String>,
    inputs: &'a [ManifestInput],
    outputs: &'a [String],
    timestamp_utc: String,
}

impl Run {
    fn read(&mut self, path: &Path) -> Result<Vec<u8>, CliError> {
        let bytes = std::fs::read(path)
            .map_err(|e| CliError::new(EXIT_IO, format!("cannot read {}: {e}", path.display())))?;
        self.inputs.push(ManifestInput {
            path: path.display().to_string(),
            sha256: hex_digest(&bytes),
        });
        Ok(bytes)
    }

    fn read_image(&mut self, path: &Path) -> Result<GrayImage, CliError> {
        let bytes = self.read(path)?;
        read_pgm(&bytes)
            .map_err(|e| CliError::new(EXIT_IO, format!("{}: {e}", path.display())))
    }

    fn write(&mut self, path: &Path, bytes: &[u8]) -> Result<(), CliError> {
        std::fs::write(path, bytes)
            .map_err(|e| CliError::new(EXIT_IO, format!("cannot write {}: {e}", path.display())))?;
        self.outputs.push(path.display().to_string());
        Ok(())
    }

    fn finish(&self, manifest: Option<&Path>) -> Result<(), CliError> {
        if let Some(path) = manifest {
            let manifest = RunManifest {
                tool_version: env!("CARGO_PKG_VERSION"),
                command_line: std::env::args().collect(),
                inputs: &self.inputs,
                outputs: &self.outputs,
                timestamp_utc: chrono::Utc::now().to_rfc3339(),
            };
            std::fs::write(path, to_json(&manifest)).map_err(|e| {
                CliError::new(EXIT_IO, format!("cannot write {}: {e}", path.display()))
            })?;
        }
        Ok(())
    }
}

/// Print to stdout, tolerating a closed pipe.
fn emit(line: &str) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout(), "{line}");
}

fn hex_digest(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Serialize)]
struct EnhanceReport {
    quality: QualityReport,
    moments: MomentSummary,
    transfer_map: TransferMap,
    warnings: Vec<String>,
}

fn cmd_enhance(args: &EnhanceArgs) -> Result<(), CliError> {
    let mut run = Run::default();
    let input = run.read_image(&args.input)?;
    let norm = args.beta_normalization.into();
    let (eq, moments): (Equalized, MomentSummary) = match args.method {
        MethodArg::Hkmdhe => equalize_hkmdhe_with(&input, norm),
        MethodArg::Bhe => {
            let eq = equalize_bhe(&input);
            (eq, hkst_core::metrics::compute_moments_with(&input, norm))
        }
        MethodArg::Global => {
            let eq = equalize_global(&input);
            (eq, hkst_core::metrics::compute_moments_with(&input, norm))
        }
    };
    run.write(&args.output, &write_pgm(&eq.image))?;
    if let Some(report_path) = &args.report {
        let mut warnings = Vec::new();
        if eq.degenerate {
            warnings.push("degenerate histogram: equalizer fell back to identity".to_string());
        }
        let report = EnhanceReport {
            quality: quality_report_with(&input, &eq.image, norm)?,
            moments,
            transfer_map: eq.map,
            warnings,
        };
        run.write(report_path, to_json(&report).as_bytes())?;
    }
    run.finish(args.manifest.as_deref())
}

fn cmd_metrics(args: &MetricsArgs) -> Result<(), CliError> {
    let mut run = Run::default();
    let reference = run.read_image(&args.reference)?;
    let test = run.read_image(&args.test)?;
    let report = quality_report_with(&reference, &test, args.beta_normalization.into())?;
    let json = to_json(&report);
    match &args.out {
        Some(path) => run.write(path, json.as_bytes())?,
        None => emit(&json),
    }
    run.finish(args.manifest.as_deref())
}

fn cmd_stx(args: &StxArgs) -> Result<(), CliError> {
    let mut run = Run::default();
    let text = String::from_utf8(run.read(&args.input)?)
        .map_err(|_| CliError::new(EXIT_IO, "signal CSV is not valid UTF-8"))?;
    let signal = csvio::read_signal_csv(&text)
        .map_err(|e| CliError::new(EXIT_IO, e.to_string()))?;
    let signal = if args.no_mean_removal {
        signal
    } else {
        signal.mean_removed()
    };
    let spectrum = st_forward(&signal)?;
    run.write(&args.out, csvio::write_spectrum_csv(&spectrum).as_bytes())?;
    run.finish(args.manifest.as_deref())
}

fn cmd_analyze(args: &AnalyzeArgs) -> Result<(), CliError> {
    let mut run = Run::default();
    let input = run.read_image(&args.input)?;
    let config = PipelineConfig {
        unfold_mode: match args.mode {
            ModeArg::Rows => UnfoldMode::Rows,
            ModeArg::Raster => UnfoldMode::Raster,
        },
        mean_removal: !args.no_mean_removal,
        enhancement: match args.enhancement {
            EnhancementArg::Hkmdhe => Enhancement::Hkmdhe,
            EnhancementArg::Bhe => Enhancement::Bhe,
            EnhancementArg::Global => Enhancement::Global,
            EnhancementArg::None => Enhancement::None,
        },
        beta_normalization: args.beta_normalization.into(),
    };
    let analysis = analyze(&input, &config)?;
    let json = to_json(&analysis.report);
    match &args.out {
        Some(path) => run.write(path, json.as_bytes())?,
        None => emit(&json),
    }
    if let Some(path) = &args.spectrum_csv {
        run.write(path, csvio::write_amplitude_csv(&analysis.aggregate).as_bytes())?;
    }
    run.finish(args.manifest.as_deref())
}

fn parse_size(size: &str) -> Result<(usize, usize), CliError> {
    let (w, h) = size
        .split_once(['x', 'X'])
        .ok_or_else(|| CliError::new(EXIT_USAGE, format!("--size must be WxH, got '{size}'")))?;
    let parse = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| CliError::new(EXIT_USAGE, format!("bad dimension '{s}' in --size")))
    };
    Ok((parse(w)?, parse(h)?))
}

fn cmd_phantom(args: &PhantomArgs) -> Result<(), CliError> {
    let mut run = Run::default();
    let (width, height) = parse_size(&args.size)?;
    let reject_flags = |names: &[(&str, bool)]| -> Result<(), CliError> {
        for (name, present) in names {
            if *present {
                return Err(CliError::new(
                    EXIT_USAGE,
                    format!("{name} does not apply to this phantom kind"),
                ));
            }
        }
        Ok(())
    };
    let spec = match args.kind {
        KindArg::Grating => {
            reject_flags(&[("--hurst", args.hurst.is_some())])?;
            PhantomSpec::Grating {
                width,
                height,
                period: args
                    .period
                    .ok_or_else(|| CliError::new(EXIT_USAGE, "grating needs --period"))?,
                amplitude: args
                    .amplitude
                    .ok_or_else(|| CliError::new(EXIT_USAGE, "grating needs --amplitude"))?,
                offset: args
                    .offset
                    .ok_or_else(|| CliError::new(EXIT_USAGE, "grating needs --offset"))?,
            }
        }
        KindArg::TwoLevel => {
            reject_flags(&[
                ("--period", args.period.is_some()),
                ("--amplitude", args.amplitude.is_some()),
                ("--offset", args.offset.is_some()),
                ("--hurst", args.hurst.is_some()),
            ])?;
            PhantomSpec::TwoLevel {
                width,
                height,
                seed: args.seed,
            }
        }
        KindArg::Fractal => {
            reject_flags(&[
                ("--period", args.period.is_some()),
                ("--amplitude", args.amplitude.is_some()),
                ("--offset", args.offset.is_some()),
            ])?;
            PhantomSpec::Fractal {
                width,
                height,
                hurst: args
                    .hurst
                    .ok_or_else(|| CliError::new(EXIT_USAGE, "fractal needs --hurst"))?,
                seed: args.seed,
            }
        }
    };
    let image = spec.generate()?;
    run.write(&args.out, &write_pgm(&image))?;
    run.finish(args.manifest.as_deref())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Enhance(args) => cmd_enhance(args),
        Command::Metrics(args) => cmd_metrics(args),
        Command::Stx(args) => cmd_stx(args),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Phantom(args) => cmd_phantom(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("hkst: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}
