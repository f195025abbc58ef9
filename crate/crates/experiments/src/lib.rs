//! Reproducible experiments on geometric phases under imperfect state
//! preparation: T-sweeps, Gamma-scaled sweeps, Bloch-sphere paths, the
//! verification battery and family validation.

pub mod config;
pub mod error;
pub mod fig3;
pub mod plot;
pub mod sweep;
pub mod validate;
pub mod verify;

pub use config::{Experiment, ExperimentConfig};
pub use error::{ExperimentError, Result};
