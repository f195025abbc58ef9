//! Stand-alone validation of a configured family.

use std::path::PathBuf;

use geophase::hamiltonian::{smooth_eigenframe, validate_family, ValidationReport};

use crate::config::ExperimentConfig;
use crate::error::{ExperimentError, Result};

#[derive(Debug, Clone)]
pub struct ValidateOutput {
    pub report: ValidationReport,
    pub json: PathBuf,
}

/// Checks Hermiticity, cyclicity and the gap on the configured grid, then
/// builds a smooth eigenframe. The report is written before a failure is
/// returned.
pub fn run_validate(cfg: &ExperimentConfig) -> Result<ValidateOutput> {
    cfg.validate()?;
    let family = cfg.build_family()?;
    let report = validate_family(family.as_ref(), cfg.grid_size, None)?;
    let json = cfg.output_path("_validation.json");
    std::fs::write(&json, serde_json::to_string_pretty(&report)? + "\n")?;
    if !report.passes() {
        return Err(ExperimentError::Validation(report.failures().join("; ")));
    }
    smooth_eigenframe(family.as_ref(), cfg.grid_size)
        .map_err(|e| ExperimentError::Validation(e.to_string()))?;
    Ok(ValidateOutput { report, json })
}
