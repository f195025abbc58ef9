//! Property battery for any valid family: fidelity constancy, convergence of
//! the imperfection prediction, decay of the oscillatory remainder and
//! agreement between phase estimators.
//!
//! Evolution times are chosen in units of `2 pi / min_gap`, so one battery
//! serves families at any energy scale.

use std::f64::consts::TAU;
use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use geophase::hamiltonian::{smooth_eigenframe, validate_family, HamiltonianFamily};
use geophase::phase::{
    geometric_phase_continuous, geometric_phase_pancharatnam, key_formula_prediction,
    key_formula_tolerance, numeric_geometric_phases, phase_distance, EnergyProfile,
};
use geophase::propagator::{ImperfectionSpec, IntegratorSettings};
use geophase::registry::EstimatorRegistry;
use geophase::C64;
use log::info;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::{ExperimentError, Result};
use crate::sweep::{fmt_f64, remainder_magnitude};

pub const FIDELITY_TOL: f64 = 1e-9;
pub const CROSS_METHOD_TOL: f64 = 1e-5;
/// Geodesic polygons converge at second order, so the solid-angle estimate
/// gets a looser bound than the other estimators.
pub const SOLID_ANGLE_TOL: f64 = 1e-3;
pub const MIN_REMAINDER_DECAY: f64 = 3.0;

/// Times, in units of `2 pi / min_gap`, for the prediction check.
pub const KEY_FORMULA_TIMES: [f64; 4] = [64.0, 128.0, 256.0, 512.0];
/// Start of the short-time remainder window, same units.
pub const REMAINDER_TIME: f64 = 16.0;
pub const REMAINDER_STRETCH: f64 = 32.0;
/// Samples averaged in each remainder window, spread over `[T, 1.25 T)`.
pub const REMAINDER_WINDOW: usize = 8;
/// Below this the remainder counts as identically zero.
pub const REMAINDER_FLOOR: f64 = 1e-12;
/// Time of the estimator comparison, in units of `2 pi / min_gap`.
pub const CROSS_METHOD_TIME: f64 = 16.0;
/// Largest dynamical phase spread between neighbouring output samples.
pub const MAX_PHASE_PER_SAMPLE: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    /// `value <= threshold`, except for decay ratios where it is `>=`.
    pub pass: bool,
}

impl Check {
    fn at_most(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Check {
            name: name.into(),
            value,
            threshold,
            pass: value <= threshold,
        }
    }

    fn at_least(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Check {
            name: name.into(),
            value,
            threshold,
            pass: value >= threshold,
        }
    }

    pub fn line(&self) -> String {
        let op = if self.name.contains("decay") {
            ">="
        } else {
            "<="
        };
        format!(
            "[{}] {}: {:.3e} {} {:.3e}",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.value,
            op,
            self.threshold
        )
    }
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub family: String,
    pub time_unit: f64,
    pub checks: Vec<Check>,
    pub csv: PathBuf,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// `a_0 = sqrt(1 - w)` and the weight `w` split evenly over the excited
/// levels, with phases `i^(n-1)`.
pub fn spread_imperfection(dim: usize, a0: C64, a1: C64) -> Result<ImperfectionSpec> {
    if dim == 2 {
        return Ok(ImperfectionSpec::two_level(a0, a1)?);
    }
    let w = a1.norm_sqr() / (a0.norm_sqr() + a1.norm_sqr());
    let each = (w / (dim - 1) as f64).sqrt();
    let mut amps = vec![C64::new((1.0 - w).sqrt(), 0.0)];
    let mut phase = C64::new(1.0, 0.0);
    for _ in 1..dim {
        amps.push(phase * each);
        phase *= C64::new(0.0, 1.0);
    }
    Ok(ImperfectionSpec::try_new(amps)?)
}

/// Runs the battery. Validation problems are reported as
/// [`ExperimentError::Validation`] before anything is integrated.
pub fn run_verify(cfg: &ExperimentConfig) -> Result<VerifyReport> {
    cfg.validate()?;
    let family = cfg.build_family()?;
    let report = validate_family(family.as_ref(), cfg.grid_size, None)?;
    if !report.passes() {
        return Err(ExperimentError::Validation(report.failures().join("; ")));
    }
    let (a0, a1) = cfg.amplitudes.fixed_pair()?;
    let amps = spread_imperfection(family.dim(), a0, a1)?;
    let checks = battery(family.as_ref(), &amps, cfg)?;
    let frame_gap = report.min_gap;
    let csv = cfg.output_path("_verify.csv");
    let mut w = csv::Writer::from_writer(BufWriter::new(File::create(&csv)?));
    w.write_record(["check", "value", "threshold", "pass"])?;
    for c in &checks {
        w.write_record([
            c.name.clone(),
            fmt_f64(c.value),
            fmt_f64(c.threshold),
            c.pass.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(VerifyReport {
        family: family.label(),
        time_unit: TAU / frame_gap,
        checks,
        csv,
    })
}

pub fn battery(
    family: &dyn HamiltonianFamily,
    amps: &ImperfectionSpec,
    cfg: &ExperimentConfig,
) -> Result<Vec<Check>> {
    let frame = smooth_eigenframe(family, cfg.grid_size)?;
    let unit = TAU / frame.min_gap();
    let settings = IntegratorSettings::with_output_points(cfg.grid_size);
    let perfect = ImperfectionSpec::perfect(family.dim());
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    info!("verify: {} with time unit {unit:.4e} us", family.label());

    // Overlap of the two evolutions stays at <psi(0)|psi'(0)> = a_0.
    let mut worst = 0.0f64;
    for _ in 0..3 {
        let t = unit * rng.gen_range(16.0..256.0);
        let (_, evs) =
            numeric_geometric_phases(family, t, &[perfect.clone(), amps.clone()], &settings)?;
        for (p, q) in evs[0].path.states.iter().zip(&evs[1].path.states) {
            worst = worst.max((p.inner(q).norm() - amps.a(0).norm()).abs());
        }
    }
    checks.push(Check::at_most("fidelity_constancy", worst, FIDELITY_TOL));

    let profile = EnergyProfile::from_frame(&frame);
    let berry0 = frame.berry_phase(0)?;
    let tol = key_formula_tolerance(&frame, amps);
    for &k in &KEY_FORMULA_TIMES {
        let t = k * unit;
        let (reports, _) =
            numeric_geometric_phases(family, t, std::slice::from_ref(amps), &settings)?;
        let predicted = key_formula_prediction(&profile, amps, berry0, t)?;
        let gap = phase_distance(reports[0].geometric_phase_wrapped, predicted);
        checks.push(Check::at_most(format!("key_formula_T{k}"), gap, tol));
    }

    let window_mean = |t0: f64| -> Result<f64> {
        let mut acc = 0.0;
        for j in 0..REMAINDER_WINDOW {
            let t = t0 * (1.0 + 0.25 * j as f64 / REMAINDER_WINDOW as f64);
            acc += remainder_magnitude(family, amps, t)?.norm();
        }
        Ok(acc / REMAINDER_WINDOW as f64)
    };
    let short = window_mean(REMAINDER_TIME * unit)?;
    let long = window_mean(REMAINDER_TIME * REMAINDER_STRETCH * unit)?;
    let ratio = if short < REMAINDER_FLOOR || long == 0.0 {
        f64::INFINITY
    } else {
        short / long
    };
    checks.push(Check::at_least(
        "remainder_decay",
        ratio,
        MIN_REMAINDER_DECAY,
    ));

    let t = CROSS_METHOD_TIME * unit;
    let points =
        ((t * frame.max_spread() / MAX_PHASE_PER_SAMPLE).ceil() as usize + 1).max(cfg.grid_size);
    let dense = IntegratorSettings::with_output_points(points);
    let (reports, evs) = numeric_geometric_phases(family, t, std::slice::from_ref(amps), &dense)?;
    let path = &evs[0].path;
    let cont = geometric_phase_continuous(path, family)?.geometric_phase_wrapped;
    let panch = geometric_phase_pancharatnam(path)?.geometric_phase_wrapped;
    checks.push(Check::at_most(
        "continuous_vs_pancharatnam",
        phase_distance(cont, panch),
        CROSS_METHOD_TOL,
    ));
    checks.push(Check::at_most(
        "pipeline_vs_pancharatnam",
        phase_distance(reports[0].geometric_phase_wrapped, panch),
        CROSS_METHOD_TOL,
    ));
    if family.dim() == 2 {
        let est = EstimatorRegistry::with_builtins();
        let sa = est
            .get("solid_angle")?
            .estimate(path, None)?
            .geometric_phase_wrapped;
        checks.push(Check::at_most(
            "solid_angle_vs_pancharatnam",
            phase_distance(sa, panch),
            SOLID_ANGLE_TOL,
        ));
    }
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spread_keeps_ground_weight() {
        let a = spread_imperfection(4, C64::new(0.9, 0.0), C64::new(0.1, 0.0)).unwrap();
        let w: f64 = (1..4).map(|n| a.weight(n)).sum();
        assert!((w - 0.01 / 0.82).abs() < 1e-12);
        assert!((a.weight(1) - a.weight(3)).abs() < 1e-15);
        assert!(a.a(2).re.abs() < 1e-15);
    }

    #[test]
    fn check_lines() {
        assert!(Check::at_most("x", 1.0, 2.0).line().starts_with("[PASS] x"));
        assert!(Check::at_least("remainder_decay", 1.0, 3.0)
            .line()
            .starts_with("[FAIL]"));
    }
}
