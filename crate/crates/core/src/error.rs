use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Structural problem with an input file (missing column, bad header, bad field value).
    #[error("{0}")]
    Format(String),

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("missing marker: {0}")]
    MissingMarker(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("series too short: need more than {min} samples, got {len}")]
    Length { min: usize, len: usize },

    #[error("no progression direction: net pelvis displacement {displacement:.3} m < 0.5 m")]
    NoProgression { displacement: f64 },

    #[error("no dominant period: best autocorrelation peak {best:.3} in 0.4-2.5 s band is below 0.3")]
    NoDominantPeriod { best: f64 },

    #[error("ground truth unavailable: trial has no GRF channels")]
    GroundTruthUnavailable,

    #[error("unknown method '{name}'; valid methods: {}", valid.join(", "))]
    UnknownMethod { name: String, valid: Vec<&'static str> },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    /// True for failures of the detection stage itself, as opposed to bad input files or
    /// arguments. The command line maps these to a distinct exit code.
    pub fn is_detection_failure(&self) -> bool {
        matches!(
            self,
            Error::NoProgression { .. }
                | Error::NoDominantPeriod { .. }
                | Error::GroundTruthUnavailable
                | Error::Length { .. }
                | Error::Parameter(_)
        )
    }
}
