//! End-to-end tests of the `hkst` binary: exit codes, file outputs, and
//! report contents.

use std::path::Path;
use std::process::{Command, Output};

fn hkst(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hkst"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("spawn hkst")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn make_phantom(dir: &Path, name: &str, extra: &[&str]) {
    let mut args = vec!["phantom", "--out", name];
    args.extend_from_slice(extra);
    let out = hkst(&args, dir);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn help_and_version_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&hkst(&["--help"], dir.path())), 0);
    assert_eq!(code(&hkst(&["--version"], dir.path())), 0);
    assert_eq!(code(&hkst(&["enhance", "--help"], dir.path())), 0);
}

#[test]
fn unknown_flag_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&hkst(&["analyze", "--bogus"], dir.path())), 64);
    assert_eq!(code(&hkst(&["frobnicate"], dir.path())), 64);
}

#[test]
fn missing_input_is_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = hkst(
        &["enhance", "--input", "nope.pgm", "--output", "x.pgm"],
        dir.path(),
    );
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope.pgm"));
}

#[test]
fn malformed_pgm_is_io_error() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.pgm"), b"P5\n4 4\n65535\n").unwrap();
    let out = hkst(
        &["enhance", "--input", "bad.pgm", "--output", "x.pgm"],
        dir.path(),
    );
    assert_eq!(code(&out), 2);
}

#[test]
fn metrics_shape_mismatch_is_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    make_phantom(dir.path(), "a.pgm", &["--kind", "two-level", "--size", "8x8", "--seed", "1"]);
    make_phantom(dir.path(), "b.pgm", &["--kind", "two-level", "--size", "8x4", "--seed", "1"]);
    let out = hkst(
        &["metrics", "--reference", "a.pgm", "--test", "b.pgm"],
        dir.path(),
    );
    assert_eq!(code(&out), 3);
}

#[test]
fn raster_mode_pixel_limit_is_exit_four() {
    let dir = tempfile::tempdir().unwrap();
    make_phantom(dir.path(), "big.pgm", &["--kind", "two-level", "--size", "128x128", "--seed", "1"]);
    let out = hkst(
        &["analyze", "--input", "big.pgm", "--mode", "raster"],
        dir.path(),
    );
    assert_eq!(code(&out), 4);
}

#[test]
fn narrow_image_in_rows_mode_is_exit_four() {
    let dir = tempfile::tempdir().unwrap();
    make_phantom(dir.path(), "thin.pgm", &["--kind", "two-level", "--size", "2x16", "--seed", "1"]);
    let out = hkst(&["analyze", "--input", "thin.pgm"], dir.path());
    assert_eq!(code(&out), 4);
}

#[test]
fn phantom_argument_validation_is_exit_sixty_four() {
    let dir = tempfile::tempdir().unwrap();
    // period must divide the width
    let out = hkst(
        &["phantom", "--kind", "grating", "--size", "64x8", "--period", "7",
          "--amplitude", "100", "--offset", "128", "--out", "g.pgm"],
        dir.path(),
    );
    assert_eq!(code(&out), 64);
    // fractal needs --hurst
    let out = hkst(
        &["phantom", "--kind", "fractal", "--size", "64x64", "--seed", "1", "--out", "f.pgm"],
        dir.path(),
    );
    assert_eq!(code(&out), 64);
    // grating rejects --hurst
    let out = hkst(
        &["phantom", "--kind", "grating", "--size", "64x8", "--period", "8",
          "--amplitude", "100", "--offset", "128", "--hurst", "0.5", "--out", "g.pgm"],
        dir.path(),
    );
    assert_eq!(code(&out), 64);
    // malformed --size
    let out = hkst(
        &["phantom", "--kind", "two-level", "--size", "64by64", "--out", "t.pgm"],
        dir.path(),
    );
    assert_eq!(code(&out), 64);
}

#[test]
fn enhance_reports_split_point_and_identity_on_fixed_point() {
    let dir = tempfile::tempdir().unwrap();
    // half black, half white: already the equalizer's fixed point
    let mut pgm = b"P5\n16 16\n255\n".to_vec();
    pgm.extend_from_slice(&[0u8; 128]);
    pgm.extend_from_slice(&[255u8; 128]);
    std::fs::write(dir.path().join("bw.pgm"), &pgm).unwrap();
    let out = hkst(
        &["enhance", "--input", "bw.pgm", "--output", "bw_out.pgm", "--report", "r.json"],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(std::fs::read(dir.path().join("bw_out.pgm")).unwrap(), pgm);
    let report = std::fs::read_to_string(dir.path().join("r.json")).unwrap();
    assert!(report.contains("\"split_point\":186"), "{report}");
    assert!(report.contains("\"rmse\":0.000000000000e0"), "{report}");
}

#[test]
fn metrics_emits_report_on_stdout_and_to_file() {
    let dir = tempfile::tempdir().unwrap();
    make_phantom(dir.path(), "f.pgm", &["--kind", "fractal", "--size", "32x32", "--seed", "3", "--hurst", "0.5"]);
    let out = hkst(
        &["metrics", "--reference", "f.pgm", "--test", "f.pgm"],
        dir.path(),
    );
    assert_eq!(code(&out), 0);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("\"rmse\":0.000000000000e0"), "{stdout}");
    assert!(stdout.contains("\"psnr_db\":null"), "{stdout}");
    assert!(stdout.contains("\"ammbe\":0.000000000000e0"), "{stdout}");

    let out = hkst(
        &["metrics", "--reference", "f.pgm", "--test", "f.pgm", "--out", "m.json"],
        dir.path(),
    );
    assert_eq!(code(&out), 0);
    let file = std::fs::read_to_string(dir.path().join("m.json")).unwrap();
    assert_eq!(file, stdout.trim_end());
}

#[test]
fn stx_writes_spectrum_csv() {
    let dir = tempfile::tempdir().unwrap();
    let mut csv = String::from("index,value\n");
    for k in 0..8 {
        csv.push_str(&format!("{k},{}\n", if k % 2 == 0 { 1.0 } else { -1.0 }));
    }
    std::fs::write(dir.path().join("sig.csv"), &csv).unwrap();
    let out = hkst(&["stx", "--input", "sig.csv", "--out", "spec.csv"], dir.path());
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let spec = std::fs::read_to_string(dir.path().join("spec.csv")).unwrap();
    let mut lines = spec.lines();
    assert_eq!(lines.next(), Some("tau,voice,re,im,abs"));
    assert_eq!(lines.count(), 64);

    // empty signal file is an input error
    std::fs::write(dir.path().join("empty.csv"), "index,value\n").unwrap();
    let out = hkst(&["stx", "--input", "empty.csv", "--out", "x.csv"], dir.path());
    assert_eq!(code(&out), 2);
}

#[test]
fn analyze_finds_grating_voice_and_warns_on_constant() {
    let dir = tempfile::tempdir().unwrap();
    make_phantom(dir.path(), "g.pgm", &["--kind", "grating", "--size", "64x16", "--period", "8",
                                        "--amplitude", "100", "--offset", "128"]);
    let out = hkst(
        &["analyze", "--input", "g.pgm", "--enhancement", "none"],
        dir.path(),
    );
    assert_eq!(code(&out), 0);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("\"dominant_voice\":8"), "{stdout}");

    // constant image: success with a warning and a null statistic
    make_phantom(dir.path(), "c.pgm", &["--kind", "grating", "--size", "16x16", "--period", "4",
                                        "--amplitude", "0", "--offset", "90"]);
    let out = hkst(
        &["analyze", "--input", "c.pgm", "--enhancement", "none"],
        dir.path(),
    );
    assert_eq!(code(&out), 0);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("\"dominant_voice\":null"), "{stdout}");
    assert!(stdout.contains("constant"), "{stdout}");
}

#[test]
fn manifest_records_inputs_and_outputs() {
    let dir = tempfile::tempdir().unwrap();
    make_phantom(dir.path(), "f.pgm", &["--kind", "fractal", "--size", "32x32", "--seed", "5", "--hurst", "0.4"]);
    let out = hkst(
        &["enhance", "--input", "f.pgm", "--output", "e.pgm", "--manifest", "run.json"],
        dir.path(),
    );
    assert_eq!(code(&out), 0);
    let manifest = std::fs::read_to_string(dir.path().join("run.json")).unwrap();
    assert!(manifest.contains("\"tool_version\""), "{manifest}");
    assert!(manifest.contains("\"sha256\""), "{manifest}");
    assert!(manifest.contains("f.pgm"), "{manifest}");
    assert!(manifest.contains("e.pgm"), "{manifest}");
    assert!(manifest.contains("\"timestamp_utc\""), "{manifest}");
}

#[test]
fn reruns_produce_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    make_phantom(dir.path(), "f.pgm", &["--kind", "fractal", "--size", "32x32", "--seed", "9", "--hurst", "0.6"]);
    for n in ["1", "2"] {
        let out = hkst(
            &["analyze", "--input", "f.pgm",
              "--out", &format!("a{n}.json"), "--spectrum-csv", &format!("s{n}.csv")],
            dir.path(),
        );
        assert_eq!(code(&out), 0);
    }
    assert_eq!(
        std::fs::read(dir.path().join("a1.json")).unwrap(),
        std::fs::read(dir.path().join("a2.json")).unwrap()
    );
    assert_eq!(
        std::fs::read(dir.path().join("s1.csv")).unwrap(),
        std::fs::read(dir.path().join("s2.csv")).unwrap()
    );
}
