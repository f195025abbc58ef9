use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("config error: {0}")]
    Config(String),

    #[error("cannot read config {path}: {source}")]
    ConfigFile {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("Gamma = {gamma} exceeds the smallest swept T = {t_min}")]
    InvalidGamma { gamma: f64, t_min: f64 },

    #[error("family failed validation: {0}")]
    Validation(String),

    #[error("numerical battery failed: {0}")]
    Battery(String),

    #[error(transparent)]
    Core(#[from] geophase::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = ExperimentError> = std::result::Result<T, E>;

impl ExperimentError {
    /// 1 for validation failures, 2 for numerical failures, 3 for I/O and
    /// configuration problems.
    pub fn exit_code(&self) -> i32 {
        use geophase::Error as E;
        match self {
            Self::Validation(_) => 1,
            Self::Battery(_) => 2,
            Self::Config(_) | Self::ConfigFile { .. } | Self::InvalidGamma { .. } => 3,
            Self::Io(_) | Self::Csv(_) | Self::Json(_) => 3,
            Self::Core(e) => match e {
                E::Io(_) | E::Csv(_) | E::Parse { .. } | E::UnknownStrategy(_) => 3,
                E::InvalidParameter(_) | E::InvalidAmplitudes { .. } => 3,
                E::NonHermitianInput { .. } | E::GapTooSmall { .. } => 1,
                _ => 2,
            },
        }
    }
}
