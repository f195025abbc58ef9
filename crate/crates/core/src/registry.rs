//! Name-keyed strategy registries.
//!
//! Hamiltonian models and path phase estimators are registered under a
//! string name and looked up at runtime, so front ends can select them from
//! configuration files without matching on concrete types.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::Deserialize;
use serde_json::Value;

use crate::bloch::{gp_from_solid_angle, solid_angle, BlochPath, Closure};
use crate::error::{Error, Result};
use crate::hamiltonian::{
    HamiltonianFamily, RandomAnalyticFamily, SampledFamily, SpinHalfFamily, SpinHalfParams,
    DEFAULT_RANDOM_DIAGONAL, DEFAULT_RANDOM_STRENGTH,
};
use crate::phase::{
    geometric_phase_continuous, geometric_phase_pancharatnam, PhaseMethod, PhaseReport,
};
use crate::propagator::SampledPath;

/// Builds a Hamiltonian family from JSON parameters.
pub trait FamilyFactory: Send + Sync {
    fn name(&self) -> &str;
    fn describe(&self) -> &str;
    fn build(&self, params: &Value) -> Result<Box<dyn HamiltonianFamily>>;
}

/// Estimates the geometric phase of a sampled path. Estimators that need the
/// Hamiltonian fail with [`Error::InvalidParameter`] when none is given.
pub trait PhaseEstimator: Send + Sync {
    fn name(&self) -> &str;
    fn method(&self) -> PhaseMethod;
    fn estimate(
        &self,
        path: &SampledPath,
        family: Option<&dyn HamiltonianFamily>,
    ) -> Result<PhaseReport>;
}

/// Ordered map from names to boxed strategies.
pub struct Registry<T: ?Sized> {
    entries: BTreeMap<String, Box<T>>,
}

impl<T: ?Sized> Default for Registry<T> {
    fn default() -> Self {
        Self {
            entries: BTreeMap::new(),
        }
    }
}

impl<T: ?Sized> Registry<T> {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: &str, item: Box<T>) -> Result<()> {
        if self.entries.contains_key(name) {
            return Err(Error::DuplicateStrategy(name.to_string()));
        }
        self.entries.insert(name.to_string(), item);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<&T> {
        self.entries
            .get(name)
            .map(|b| b.as_ref())
            .ok_or_else(|| Error::UnknownStrategy(name.to_string()))
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.keys().map(String::as_str).collect()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }
}

pub type FamilyRegistry = Registry<dyn FamilyFactory>;
pub type EstimatorRegistry = Registry<dyn PhaseEstimator>;

impl Registry<dyn FamilyFactory> {
    /// `spin_half`, `sampled_family` and `random_analytic`.
    pub fn with_builtins() -> Self {
        let mut r = Self::default();
        for f in [
            Box::new(SpinHalfFactory) as Box<dyn FamilyFactory>,
            Box::new(SampledFactory),
            Box::new(RandomAnalyticFactory),
        ] {
            let name = f.name().to_string();
            r.insert(&name, f).expect("builtin names are distinct");
        }
        r
    }

    pub fn register(&mut self, factory: Box<dyn FamilyFactory>) -> Result<()> {
        let name = factory.name().to_string();
        self.insert(&name, factory)
    }

    pub fn build(&self, name: &str, params: &Value) -> Result<Box<dyn HamiltonianFamily>> {
        self.get(name)?.build(params)
    }
}

impl Registry<dyn PhaseEstimator> {
    /// `continuous`, `pancharatnam` and `solid_angle`.
    pub fn with_builtins() -> Self {
        let mut r = Self::default();
        for e in [
            Box::new(ContinuousEstimator) as Box<dyn PhaseEstimator>,
            Box::new(PancharatnamEstimator),
            Box::new(SolidAngleEstimator),
        ] {
            let name = e.name().to_string();
            r.insert(&name, e).expect("builtin names are distinct");
        }
        r
    }

    pub fn register(&mut self, estimator: Box<dyn PhaseEstimator>) -> Result<()> {
        let name = estimator.name().to_string();
        self.insert(&name, estimator)
    }
}

fn parse<T: for<'de> Deserialize<'de>>(model: &str, params: &Value) -> Result<T> {
    T::deserialize(params).map_err(|e| Error::InvalidParameter(format!("{model} parameters: {e}")))
}

struct SpinHalfFactory;

impl FamilyFactory for SpinHalfFactory {
    fn name(&self) -> &str {
        "spin_half"
    }

    fn describe(&self) -> &str {
        "spin one-half in a rotating field; {\"theta\": rad, \"omega0\": rad/us}"
    }

    fn build(&self, params: &Value) -> Result<Box<dyn HamiltonianFamily>> {
        let p: SpinHalfParams = parse(self.name(), params)?;
        p.validate()?;
        Ok(Box::new(SpinHalfFamily::new(p)))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SampledParams {
    path: PathBuf,
}

struct SampledFactory;

impl FamilyFactory for SampledFactory {
    fn name(&self) -> &str {
        "sampled_family"
    }

    fn describe(&self) -> &str {
        "matrices tabulated on a grid in a text file; {\"path\": file}"
    }

    fn build(&self, params: &Value) -> Result<Box<dyn HamiltonianFamily>> {
        let p: SampledParams = parse(self.name(), params)?;
        Ok(Box::new(SampledFamily::from_path(p.path)?))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RandomParams {
    #[serde(default)]
    seed: u64,
    #[serde(default = "default_diagonal")]
    diagonal: Vec<f64>,
    #[serde(default = "default_harmonics")]
    harmonics: usize,
    #[serde(default = "default_strength")]
    strength: f64,
}

fn default_diagonal() -> Vec<f64> {
    DEFAULT_RANDOM_DIAGONAL.to_vec()
}

fn default_harmonics() -> usize {
    2
}

fn default_strength() -> f64 {
    DEFAULT_RANDOM_STRENGTH
}

struct RandomAnalyticFactory;

impl FamilyFactory for RandomAnalyticFactory {
    fn name(&self) -> &str {
        "random_analytic"
    }

    fn describe(&self) -> &str {
        "seeded random harmonics on a fixed diagonal; {\"seed\", \"diagonal\", \"harmonics\", \"strength\"}"
    }

    fn build(&self, params: &Value) -> Result<Box<dyn HamiltonianFamily>> {
        let p: RandomParams = parse(self.name(), params)?;
        Ok(Box::new(RandomAnalyticFamily::new(
            p.seed,
            &p.diagonal,
            p.harmonics,
            p.strength,
        )?))
    }
}

struct ContinuousEstimator;

impl PhaseEstimator for ContinuousEstimator {
    fn name(&self) -> &str {
        "continuous"
    }

    fn method(&self) -> PhaseMethod {
        PhaseMethod::Continuous
    }

    fn estimate(
        &self,
        path: &SampledPath,
        family: Option<&dyn HamiltonianFamily>,
    ) -> Result<PhaseReport> {
        let family = family.ok_or_else(|| {
            Error::InvalidParameter("the continuous estimator needs the Hamiltonian".into())
        })?;
        geometric_phase_continuous(path, family)
    }
}

struct PancharatnamEstimator;

impl PhaseEstimator for PancharatnamEstimator {
    fn name(&self) -> &str {
        "pancharatnam"
    }

    fn method(&self) -> PhaseMethod {
        PhaseMethod::PancharatnamDiscrete
    }

    fn estimate(
        &self,
        path: &SampledPath,
        _: Option<&dyn HamiltonianFamily>,
    ) -> Result<PhaseReport> {
        geometric_phase_pancharatnam(path)
    }
}

struct SolidAngleEstimator;

impl PhaseEstimator for SolidAngleEstimator {
    fn name(&self) -> &str {
        "solid_angle"
    }

    fn method(&self) -> PhaseMethod {
        PhaseMethod::SolidAngle
    }

    /// Two-level paths only. The dynamical term is whatever makes the sum
    /// equal `-Omega / 2`.
    fn estimate(
        &self,
        path: &SampledPath,
        _: Option<&dyn HamiltonianFamily>,
    ) -> Result<PhaseReport> {
        let bloch = BlochPath::from_sampled(path)?;
        let omega = solid_angle(&bloch, Closure::GeodesicClose)?;
        let total = path.first().inner(path.last()).arg();
        let mut report = PhaseReport::new(total, -0.5 * omega - total, PhaseMethod::SolidAngle);
        report.geometric_phase_wrapped = gp_from_solid_angle(omega);
        Ok(report)
    }
}
