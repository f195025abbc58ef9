//! Geometric phases accompanying adiabatic quantum evolutions.
//!
//! The crate is organised around a handful of building blocks:
//!
//! - [`hamiltonian`]: cyclic Hamiltonian families (the spin-half rotating-field
//!   model, sampled families read from disk, seeded random analytic families),
//!   family validation and gauge-smoothed eigenframes with Berry phases.
//! - [`propagator`]: the closed-form spin-half propagator and a fixed-step
//!   fourth-order integrator of `i d/ds |psi> = T H(s) |psi>`.
//! - [`phase`]: geometric-phase functionals on sampled paths, the closed forms
//!   for the spin-half model, the large-`T` approximations and the
//!   imperfect-preparation prediction.
//! - [`bloch`]: Bloch-sphere geometry of two-level paths (solid angles,
//!   self-crossings).
//! - [`registry`]: name-keyed registries for Hamiltonian models and path phase
//!   estimators, used to select strategies at runtime.

pub mod bloch;
pub mod error;
pub mod hamiltonian;
pub mod linalg;
pub mod phase;
pub mod propagator;
pub mod registry;

pub use error::{Error, Result};
pub use linalg::{HermitianMatrix, StateVector, C64};
