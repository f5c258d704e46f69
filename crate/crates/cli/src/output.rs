//! Output directory handling: CSV/text writers that record a checksum for
//! every file, and the run manifest that lists them.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::CliError;

/// Name of the manifest written last into every output directory.
pub const MANIFEST_NAME: &str = "manifest.toml";

#[derive(Debug, Clone, Serialize)]
pub struct FileEntry {
    pub name: String,
    pub bytes: usize,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct GridTelemetry {
    pub label: String,
    pub rows: usize,
    pub cols: usize,
    /// Export stride along rows and columns (1 = every sample).
    pub stride: usize,
}

/// Everything needed to reproduce and audit one run.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub scenario: String,
    pub out_dir: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau_p_ps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub regime: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_n: Option<usize>,
    pub wall_clock_s: f64,
    pub warnings: Vec<String>,
    pub grids: Vec<GridTelemetry>,
    pub files: Vec<FileEntry>,
}

/// An output directory being filled by one command.
pub struct OutputDir {
    path: PathBuf,
    files: Vec<FileEntry>,
    grids: Vec<GridTelemetry>,
    started: Instant,
}

impl OutputDir {
    /// Creates `path`.  An existing non-empty directory is refused unless
    /// `force` is set, so that the manifest describes the directory fully.
    pub fn create(path: &Path, force: bool) -> Result<Self, CliError> {
        if path.exists() {
            let non_empty = fs::read_dir(path)
                .map_err(|e| CliError::Input(format!("cannot read output directory {}: {e}", path.display())))?
                .next()
                .is_some();
            if non_empty && !force {
                return Err(CliError::Input(format!(
                    "output directory {} is not empty (use --force to write into it)",
                    path.display()
                )));
            }
        }
        fs::create_dir_all(path).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        Ok(OutputDir {
            path: path.to_path_buf(),
            files: Vec::new(),
            grids: Vec::new(),
            started: Instant::now(),
        })
    }

    pub fn record_grid(&mut self, label: &str, rows: usize, cols: usize, stride: usize) {
        self.grids.push(GridTelemetry {
            label: label.to_string(),
            rows,
            cols,
            stride,
        });
    }

    pub fn write_bytes(&mut self, name: &str, bytes: &[u8]) -> Result<(), CliError> {
        let target = self.path.join(name);
        fs::write(&target, bytes).map_err(|e| CliError::Io {
            path: target.display().to_string(),
            source: e,
        })?;
        self.files.retain(|f| f.name != name);
        self.files.push(FileEntry {
            name: name.to_string(),
            bytes: bytes.len(),
            sha256: sha256_hex(bytes),
        });
        Ok(())
    }

    /// Writes a CSV file: comma separated, header row, LF line endings,
    /// floats in shortest round-trip form.
    pub fn write_csv<I>(&mut self, name: &str, header: &[&str], rows: I) -> Result<(), CliError>
    where
        I: IntoIterator<Item = Vec<String>>,
    {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let csv_err = |e: csv::Error| CliError::Numeric(format!("csv encoding of {name}: {e}"));
        w.write_record(header).map_err(csv_err)?;
        for row in rows {
            w.write_record(&row).map_err(csv_err)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| CliError::Numeric(format!("csv encoding of {name}: {e}")))?;
        self.write_bytes(name, &bytes)
    }

    /// Writes the manifest and returns it.
    pub fn finish(self, mut manifest: RunManifest) -> Result<RunManifest, CliError> {
        manifest.out_dir = self.path.display().to_string();
        manifest.wall_clock_s = self.started.elapsed().as_secs_f64();
        manifest.grids = self.grids;
        manifest.files = self.files;
        let text = toml::to_string(&manifest).map_err(|e| CliError::Numeric(format!("manifest encoding: {e}")))?;
        let target = self.path.join(MANIFEST_NAME);
        fs::write(&target, text).map_err(|e| CliError::Io {
            path: target.display().to_string(),
            source: e,
        })?;
        Ok(manifest)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Shortest representation that reads back to the same `f64`.
pub fn num(x: f64) -> String {
    format!("{x}")
}

/// Power-of-two stride that keeps at most `max` of `n` samples; `max = 0`
/// keeps all.
pub fn stride_for(n: usize, max: usize) -> usize {
    if max == 0 || n <= max {
        1
    } else {
        n.div_ceil(max).next_power_of_two()
    }
}
