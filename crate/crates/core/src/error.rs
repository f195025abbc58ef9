use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |H - H^dagger| = {defect:e})")]
    NonHermitianInput { defect: f64 },

    #[error("eigenvector continuation lost track of level {level} at sample {sample} (overlap {overlap:.3})")]
    GapTooSmall {
        level: usize,
        sample: usize,
        overlap: f64,
    },

    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("amplitudes are not normalized (sum |a_n|^2 = {norm_sq})")]
    InvalidAmplitudes { norm_sq: f64 },

    #[error("state vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("integration step too large: local phase advance {phase:.3} rad exceeds {limit} rad")]
    StepTooLarge { phase: f64, limit: f64 },

    #[error("sample grid too coarse: {0}")]
    GridTooCoarse(String),

    #[error("adjacent samples {index} and {} are nearly orthogonal (|overlap| = {overlap:.3e})", index + 1)]
    OrthogonalNeighbors { index: usize, overlap: f64 },

    #[error("non-finite value")]
    NonFinite,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("path endpoints are antipodal; closing geodesic is undefined")]
    AntipodalEndpoints,

    #[error("sample {index} lies on the reference pole; azimuth undefined")]
    PoleCrossing { index: usize },

    #[error("segment {segment} has geodesic length {length:.3} (max 0.5)")]
    TooCoarse { segment: usize, length: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("no strategy registered under `{0}`")]
    UnknownStrategy(String),

    #[error("strategy `{0}` already registered")]
    DuplicateStrategy(String),

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
