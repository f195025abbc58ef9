//! Experiment configuration: built-in defaults per subcommand, overlaid by an
//! optional JSON file, overlaid by command-line flags.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use geophase::hamiltonian::{HamiltonianFamily, SpinHalfParams};
use geophase::registry::FamilyRegistry;
use geophase::C64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{ExperimentError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    /// us.
    pub min: f64,
    /// us.
    pub max: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.min.is_finite() && self.max.is_finite() && self.min > 0.0) {
            return Err(ExperimentError::Config(format!(
                "sweep bounds must be positive and finite, got [{}, {}]",
                self.min, self.max
            )));
        }
        if self.count < 2 || !(self.max > self.min) {
            return Err(ExperimentError::Config(format!(
                "sweep needs count >= 2 and max > min, got count {} on [{}, {}]",
                self.count, self.min, self.max
            )));
        }
        Ok(())
    }

    /// Strictly increasing T values; the last equals `max` exactly.
    pub fn grid(&self) -> Result<Vec<f64>> {
        self.validate()?;
        let n = self.count - 1;
        let mut ts: Vec<f64> = (0..=n)
            .map(|k| {
                let f = k as f64 / n as f64;
                match self.spacing {
                    Spacing::Linear => self.min + (self.max - self.min) * f,
                    Spacing::Log => self.min * (self.max / self.min).powf(f),
                }
            })
            .collect();
        ts[0] = self.min;
        ts[n] = self.max;
        Ok(ts)
    }
}

/// A complex amplitude written either as a real number or as `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Amplitude {
    Real(f64),
    Complex([f64; 2]),
}

impl Amplitude {
    pub fn value(self) -> C64 {
        match self {
            Amplitude::Real(x) => C64::new(x, 0.0),
            Amplitude::Complex([re, im]) => C64::new(re, im),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AmplitudeSpec {
    /// The pair is normalized on use.
    Fixed { a0: Amplitude, a1: Amplitude },
    /// `a0 = sqrt(1 - Gamma/T)`, `a1 = sqrt(Gamma/T)` for each listed Gamma
    /// (us), or for each listed product `Gamma * w0` (rad).
    GammaScaled {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        gammas: Option<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        gamma_omega0: Option<Vec<f64>>,
    },
}

impl AmplitudeSpec {
    pub fn fixed_default() -> Self {
        AmplitudeSpec::Fixed {
            a0: Amplitude::Real((399.0f64 / 400.0).sqrt()),
            a1: Amplitude::Real((1.0f64 / 400.0).sqrt()),
        }
    }

    /// Normalized `(a0, a1)` of a fixed spec.
    pub fn fixed_pair(&self) -> Result<(C64, C64)> {
        match self {
            AmplitudeSpec::Fixed { a0, a1 } => {
                let (a0, a1) = (a0.value(), a1.value());
                let norm = (a0.norm_sqr() + a1.norm_sqr()).sqrt();
                if !(norm.is_finite() && norm > 0.0) {
                    return Err(ExperimentError::Config(
                        "amplitudes must not both vanish".into(),
                    ));
                }
                Ok((a0 / norm, a1 / norm))
            }
            _ => Err(ExperimentError::Config(
                "this experiment needs fixed amplitudes".into(),
            )),
        }
    }

    /// Gamma values in us, given `w0` for the `gamma_omega0` form.
    pub fn gammas(&self, omega0: f64) -> Result<Vec<f64>> {
        match self {
            AmplitudeSpec::GammaScaled {
                gammas: Some(g),
                gamma_omega0: None,
            } => Ok(g.clone()),
            AmplitudeSpec::GammaScaled {
                gammas: None,
                gamma_omega0: Some(p),
            } => Ok(p.iter().map(|x| x / omega0).collect()),
            AmplitudeSpec::GammaScaled { .. } => Err(ExperimentError::Config(
                "gamma_scaled needs exactly one of `gammas` and `gamma_omega0`".into(),
            )),
            _ => Err(ExperimentError::Config(
                "this experiment needs gamma_scaled amplitudes".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    /// Registry name: `spin_half`, `sampled_family` or `random_analytic`.
    pub name: String,
    #[serde(default)]
    pub params: Value,
}

impl ModelSpec {
    pub fn spin_half_default() -> Self {
        ModelSpec {
            name: "spin_half".into(),
            params: json!({ "theta": PI / 2.0, "omega0": 5000.0 }),
        }
    }

    pub fn build(&self, registry: &FamilyRegistry) -> Result<Box<dyn HamiltonianFamily>> {
        Ok(registry.build(&self.name, &self.params)?)
    }

    pub fn spin_half_params(&self) -> Result<SpinHalfParams> {
        if self.name != "spin_half" {
            return Err(ExperimentError::Config(format!(
                "this experiment needs the spin_half model, got `{}`",
                self.name
            )));
        }
        let p: SpinHalfParams = serde_json::from_value(self.params.clone())
            .map_err(|e| ExperimentError::Config(format!("spin_half parameters: {e}")))?;
        p.validate()?;
        Ok(p)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelSpec,
    pub sweep: SweepSpec,
    pub amplitudes: AmplitudeSpec,
    /// Samples per path and per eigenframe.
    pub grid_size: usize,
    /// Output path prefix.
    pub output: PathBuf,
    pub seed: u64,
    /// Run the numeric pipeline on every k-th sweep row (and always on the
    /// last); 0 disables it.
    pub numeric_stride: usize,
    /// Single evolution time for `fig3`, us.
    pub t: f64,
    /// Worker threads; `None` lets the pool decide.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jobs: Option<usize>,
    pub plot: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Fig1,
    Fig2,
    Fig3,
    Verify,
    ValidateFamily,
}

impl ExperimentConfig {
    pub fn defaults(kind: Experiment) -> Self {
        let base = ExperimentConfig {
            model: ModelSpec::spin_half_default(),
            sweep: SweepSpec {
                min: 0.4,
                max: 4.0,
                count: 400,
                spacing: Spacing::Linear,
            },
            amplitudes: AmplitudeSpec::fixed_default(),
            grid_size: 2001,
            output: PathBuf::from("fig1"),
            seed: 0,
            numeric_stride: 1,
            t: 0.04,
            jobs: None,
            plot: false,
        };
        match kind {
            Experiment::Fig1 => base,
            Experiment::Fig2 => ExperimentConfig {
                sweep: SweepSpec {
                    min: 0.4,
                    max: 40.0,
                    count: 25,
                    spacing: Spacing::Log,
                },
                amplitudes: AmplitudeSpec::GammaScaled {
                    gammas: None,
                    gamma_omega0: Some(vec![PI / 2.0, PI, 1.5 * PI]),
                },
                output: PathBuf::from("fig2"),
                ..base
            },
            Experiment::Fig3 => ExperimentConfig {
                grid_size: 4001,
                output: PathBuf::from("fig3"),
                ..base
            },
            Experiment::Verify => ExperimentConfig {
                output: PathBuf::from("verify"),
                ..base
            },
            Experiment::ValidateFamily => ExperimentConfig {
                output: PathBuf::from("validate"),
                ..base
            },
        }
    }

    /// Defaults overlaid with the top-level keys present in the JSON file.
    pub fn load(kind: Experiment, path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ExperimentError::Config(format!("cannot open {}: {e}", path.display())))?;
        let overlay: Value =
            serde_json::from_str(&text).map_err(|source| ExperimentError::ConfigFile {
                path: path.to_path_buf(),
                source,
            })?;
        Self::defaults(kind).overlay(overlay).map_err(|e| match e {
            ExperimentError::Json(source) => ExperimentError::ConfigFile {
                path: path.to_path_buf(),
                source,
            },
            other => other,
        })
    }

    pub fn overlay(self, overlay: Value) -> Result<Self> {
        let Value::Object(fields) = overlay else {
            return Err(ExperimentError::Config(
                "config must be a JSON object".into(),
            ));
        };
        let mut merged = serde_json::to_value(&self)?;
        let target = merged
            .as_object_mut()
            .expect("config serializes to an object");
        for (k, v) in fields {
            target.insert(k, v);
        }
        let cfg: ExperimentConfig = serde_json::from_value(merged)?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.sweep.validate()?;
        if self.grid_size < 3 {
            return Err(ExperimentError::Config(format!(
                "grid_size must be at least 3, got {}",
                self.grid_size
            )));
        }
        if !(self.t.is_finite() && self.t > 0.0) {
            return Err(ExperimentError::Config(format!(
                "t must be positive, got {}",
                self.t
            )));
        }
        if self.jobs == Some(0) {
            return Err(ExperimentError::Config("jobs must be at least 1".into()));
        }
        Ok(())
    }

    /// Builds the configured model. A `random_analytic` model without its own
    /// seed takes the config seed.
    pub fn build_family(&self) -> Result<Box<dyn HamiltonianFamily>> {
        let mut spec = self.model.clone();
        if spec.name == "random_analytic" {
            if spec.params.is_null() {
                spec.params = json!({});
            }
            if let Value::Object(m) = &mut spec.params {
                m.entry("seed").or_insert(json!(self.seed));
            }
        }
        spec.build(&FamilyRegistry::with_builtins())
    }

    /// `prefix` + `suffix`, keeping the prefix's directory.
    pub fn output_path(&self, suffix: &str) -> PathBuf {
        let mut s = self.output.as_os_str().to_owned();
        s.push(suffix);
        PathBuf::from(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_grid_hits_both_ends() {
        let s = SweepSpec {
            min: 0.4,
            max: 40.0,
            count: 5,
            spacing: Spacing::Log,
        };
        let g = s.grid().unwrap();
        assert_eq!(g[0], 0.4);
        assert_eq!(g[4], 40.0);
        assert!((g[2] - 4.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_sweeps() {
        let mut s = SweepSpec {
            min: 1.0,
            max: 1.0,
            count: 4,
            spacing: Spacing::Linear,
        };
        assert!(s.grid().is_err());
        s.max = 2.0;
        s.count = 1;
        assert!(s.grid().is_err());
        s.count = 2;
        s.min = -1.0;
        assert!(s.grid().is_err());
    }

    #[test]
    fn overlay_replaces_top_level_keys() {
        let cfg = ExperimentConfig::defaults(Experiment::Fig1)
            .overlay(json!({
                "sweep": {"min": 1.0, "max": 2.0, "count": 3, "spacing": "log"},
                "amplitudes": {"kind": "fixed", "a0": 1.0, "a1": [0.0, 1.0]},
                "seed": 9
            }))
            .unwrap();
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.sweep.spacing, Spacing::Log);
        assert_eq!(cfg.grid_size, 2001);
        let (a0, a1) = cfg.amplitudes.fixed_pair().unwrap();
        assert!((a0.re - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((a1.im - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(ExperimentConfig::defaults(Experiment::Fig1)
            .overlay(json!({"grdi_size": 3}))
            .is_err());
    }

    #[test]
    fn gamma_forms() {
        let cfg = ExperimentConfig::defaults(Experiment::Fig2);
        let g = cfg.amplitudes.gammas(5000.0).unwrap();
        assert!((g[1] * 5000.0 - PI).abs() < 1e-12);
        let both = AmplitudeSpec::GammaScaled {
            gammas: Some(vec![0.1]),
            gamma_omega0: Some(vec![0.1]),
        };
        assert!(both.gammas(1.0).is_err());
    }

    #[test]
    fn output_suffix_keeps_directory() {
        let mut cfg = ExperimentConfig::defaults(Experiment::Fig1);
        cfg.output = PathBuf::from("out/run");
        assert_eq!(
            cfg.output_path("_perfect.csv"),
            PathBuf::from("out/run_perfect.csv")
        );
    }
}
