//! Command-line contract: exit-code classes, nothing written on bad input,
//! complete manifests, deterministic outputs and the CSV dialect.

use std::fs;
use std::path::{Path, PathBuf};

use clap::Parser;

use crate::error::CliError;
use crate::output::MANIFEST_NAME;
use crate::{run, Cli};

fn shipped(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/scenarios").join(name)
}

fn material() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/materials/ktp_z.toml")
}

fn invoke(args: &[&str]) -> Result<(), CliError> {
    let mut full = vec!["spdc"];
    full.extend_from_slice(args);
    run(&Cli::try_parse_from(full).expect("arguments parse"))
}

fn is_input(r: Result<(), CliError>) -> bool {
    matches!(r, Err(CliError::Input(_)))
}

/// A scenario file in `dir` built from point A with one line replaced.
fn scenario_with(dir: &Path, key: &str, line: &str) -> PathBuf {
    let base = fs::read_to_string(shipped("point_a.toml")).unwrap();
    let mut text: String = base
        .lines()
        .filter(|l| !l.starts_with(key) && !l.starts_with("material"))
        .map(|l| format!("{l}\n"))
        .collect();
    text.push_str(&format!("material = {:?}\n", material().display().to_string()));
    text.push_str(line);
    text.push('\n');
    let p = dir.join("scenario.toml");
    fs::write(&p, text).unwrap();
    p
}

#[derive(Debug, serde::Deserialize)]
struct Manifest {
    files: Vec<Entry>,
}

#[derive(Debug, serde::Deserialize)]
struct Entry {
    name: String,
    bytes: usize,
    sha256: String,
}

fn read_manifest(dir: &Path) -> Manifest {
    toml::from_str(&fs::read_to_string(dir.join(MANIFEST_NAME)).unwrap()).unwrap()
}

/// Every file except the manifest is listed, with matching size and digest.
fn assert_complete(dir: &Path) {
    let m = read_manifest(dir);
    let mut on_disk: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .filter(|n| n != MANIFEST_NAME)
        .collect();
    on_disk.sort();
    let mut listed: Vec<String> = m.files.iter().map(|f| f.name.clone()).collect();
    listed.sort();
    assert_eq!(on_disk, listed, "{}", dir.display());
    for f in &m.files {
        let bytes = fs::read(dir.join(&f.name)).unwrap();
        assert_eq!(bytes.len(), f.bytes);
        assert_eq!(crate::output::sha256_hex(&bytes), f.sha256);
    }
}

/// Header row present, LF endings only, equal field counts, numeric cells
/// parse with `.` as decimal separator.
fn assert_csv_dialect(path: &Path) {
    let text = fs::read_to_string(path).unwrap();
    assert!(!text.contains('\r'), "{}: CR in line endings", path.display());
    assert!(text.ends_with('\n'));
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert!(header.iter().all(|h| h.parse::<f64>().is_err()), "{}: no header", path.display());
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells.len(), header.len(), "{}: {line}", path.display());
    }
}

#[test]
fn usage_errors_map_to_exit_code_two() {
    let e = Cli::try_parse_from(["spdc", "jsa"]).unwrap_err();
    assert_eq!(e.exit_code(), 2);
    let e = Cli::try_parse_from(["spdc", "jsa", "--scenario", "x", "--regime", "sideways"]).unwrap_err();
    assert_eq!(e.exit_code(), 2);
    assert_eq!(CliError::Input(String::new()).exit_code(), std::process::ExitCode::from(2));
    assert_eq!(CliError::Numeric(String::new()).exit_code(), std::process::ExitCode::from(1));
}

#[test]
fn bad_inputs_leave_no_output_behind() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let o = out.to_str().unwrap();

    let missing = tmp.path().join("absent.toml");
    assert!(is_input(invoke(&["jsa", "--scenario", missing.to_str().unwrap(), "--out", o])));

    let garbled = tmp.path().join("garbled.toml");
    fs::write(&garbled, "l_c_mm = [").unwrap();
    assert!(is_input(invoke(&["jsa", "--scenario", garbled.to_str().unwrap(), "--out", o])));

    let negative = scenario_with(tmp.path(), "l_c_mm", "l_c_mm = -4.0");
    assert!(is_input(invoke(&["coherence", "--scenario", negative.to_str().unwrap(), "--out", o])));

    let a = shipped("point_a.toml");
    let a = a.to_str().unwrap();
    assert!(is_input(invoke(&["jsa", "--scenario", a, "--grid-n", "100", "--out", o])));
    assert!(is_input(invoke(&["temporal", "--scenario", a, "--tau-p-ps=-1", "--out", o])));
    assert!(is_input(invoke(&[
        "schmidt-sweep", "--scenario", a, "--tau-min-ps", "2", "--tau-max-ps", "1", "--out", o
    ])));
    assert!(is_input(invoke(&["phasematch", "--scenario", a, "--sweep-poling-nm", "790:810:3"])));

    assert!(!out.exists(), "output written despite input errors");
}

#[test]
fn non_empty_output_directory_needs_force() {
    let tmp = tempfile::tempdir().unwrap();
    let o = tmp.path().to_str().unwrap();
    fs::write(tmp.path().join("stray.txt"), "x").unwrap();
    let a = shipped("point_a.toml");
    let a = a.to_str().unwrap();
    assert!(is_input(invoke(&["phasematch", "--scenario", a, "--out", o])));
    invoke(&["phasematch", "--scenario", a, "--out", o, "--force"]).unwrap();
    assert!(tmp.path().join("phasematch.csv").exists());
}

#[test]
fn every_command_writes_a_complete_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let a = shipped("point_a.toml");
    let a = a.to_str().unwrap();
    let dir = |n: &str| tmp.path().join(n).to_str().unwrap().to_string();
    let runs: Vec<(String, Vec<String>)> = vec![
        (dir("pm"), vec!["phasematch".into(), "--sweep-lambda-p-nm".into(), "815:825:3".into(), "--sweep-poling-nm".into(), "790:810:2".into()]),
        (dir("jsa"), vec!["jsa".into(), "--grid-n".into(), "64".into()]),
        (dir("coh"), vec!["coherence".into(), "--grid-n".into(), "64".into(), "--regime".into(), "auto".into()]),
        (dir("tmp"), vec!["temporal".into(), "--method".into(), "analytic".into(), "--grid-n".into(), "64".into()]),
        (dir("fft"), vec!["temporal".into(), "--grid-n".into(), "512".into()]),
        (dir("sweep"), vec!["schmidt-sweep".into(), "--tau-min-ps".into(), "0.5".into(), "--tau-max-ps".into(), "2".into(), "--points".into(), "3".into()]),
    ];
    for (out, args) in &runs {
        let mut v: Vec<&str> = args.iter().map(String::as_str).collect();
        v.extend(["--scenario", a, "--out", out]);
        invoke(&v).unwrap_or_else(|e| panic!("{args:?}: {e}"));
        let out = Path::new(out);
        assert_complete(out);
        for f in read_manifest(out).files {
            if f.name.ends_with(".csv") {
                assert_csv_dialect(&out.join(&f.name));
            }
        }
    }
}

#[test]
fn identical_runs_give_identical_checksums() {
    let tmp = tempfile::tempdir().unwrap();
    let a = shipped("point_c.toml");
    let a = a.to_str().unwrap();
    let digests = |n: &str, cmd: &str| {
        let out = tmp.path().join(n);
        invoke(&[cmd, "--scenario", a, "--grid-n", "128", "--out", out.to_str().unwrap()]).unwrap();
        read_manifest(&out)
            .files
            .into_iter()
            .map(|f| (f.name, f.sha256))
            .collect::<Vec<_>>()
    };
    for cmd in ["jsa", "coherence", "temporal"] {
        let first = digests(&format!("{cmd}1"), cmd);
        let second = digests(&format!("{cmd}2"), cmd);
        assert!(!first.is_empty());
        assert_eq!(first, second, "{cmd}");
    }
}
