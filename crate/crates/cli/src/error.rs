use std::io;
use std::process::ExitCode;

use spdc_core::{biphoton, coherence, dispersion, qpm, schmidt, temporal};

/// Failure of a command, classified by exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad scenario file, flag value or output directory (exit 2).
    #[error("input error: {0}")]
    Input(String),
    /// The computation itself failed (exit 1).
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("i/o error writing {path}: {source}")]
    Io { path: String, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Input(_) => ExitCode::from(2),
            CliError::Numeric(_) | CliError::Io { .. } => ExitCode::from(1),
        }
    }
}

impl From<spdc_core::Error> for CliError {
    fn from(e: spdc_core::Error) -> Self {
        if e.is_input_error() {
            CliError::Input(e.to_string())
        } else {
            CliError::Numeric(e.to_string())
        }
    }
}

macro_rules! via_core {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                spdc_core::Error::from(e).into()
            }
        }
    )*};
}

via_core!(
    dispersion::DispersionError,
    qpm::QpmError,
    biphoton::BiphotonError,
    coherence::CoherenceError,
    schmidt::SchmidtError,
    temporal::TemporalError
);
