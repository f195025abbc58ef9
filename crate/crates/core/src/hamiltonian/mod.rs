//! Cyclic Hamiltonian families `s -> H(s)`, `s` in `[0, 1]`, `H(0) = H(1)`.

mod analytic;
mod frame;
mod sampled;
mod spin_half;

pub use analytic::{
    FnFamily, RandomAnalyticFamily, DEFAULT_RANDOM_DIAGONAL, DEFAULT_RANDOM_STRENGTH,
};
pub use frame::{berry_phase, smooth_eigenframe, EigenFrame, DEFAULT_GRID_SIZE};
pub use sampled::SampledFamily;
pub use spin_half::{
    spin_half_eigensystem, spin_half_hamiltonian, SpinHalfEigensystem, SpinHalfFamily,
    SpinHalfParams,
};

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{hermiticity_defect, max_abs_diff, HermitianMatrix, C64};

/// Hermiticity defect above which a family is rejected outright.
pub const NON_HERMITIAN_LIMIT: f64 = 1e-10;

/// Cyclicity tolerance, relative to `max(1, max|H(0)_ij|)`.
pub const CYCLIC_TOL: f64 = 1e-12;

/// Default spectral-gap tolerance relative to the largest `|eps_n|`.
pub const DEFAULT_RELATIVE_GAP_TOL: f64 = 1e-6;

pub trait HamiltonianFamily: Send + Sync {
    fn dim(&self) -> usize;

    fn label(&self) -> String;

    fn evaluate(&self, s: f64) -> HermitianMatrix;

    /// Writes `H(s)` into `out`. Hot loops call this; implementations that can
    /// fill in place should override it.
    fn evaluate_into(&self, s: f64, out: &mut HermitianMatrix) {
        *out = self.evaluate(s);
    }

    /// Eigenvectors of `H(0)` as columns, ascending in energy. They fix the
    /// meaning of complex amplitudes `a_n` of an initial state. The default
    /// makes the largest component of each column real and positive.
    fn initial_basis(&self) -> DMatrix<C64> {
        let (_, mut vecs) = self.evaluate(0.0).eigh();
        for mut col in vecs.column_iter_mut() {
            let mut best = 0;
            for i in 1..col.len() {
                if col[i].norm() > col[best].norm() + 1e-12 {
                    best = i;
                }
            }
            let z = col[best];
            let ph = z.conj() / z.norm();
            col.iter_mut().for_each(|x| *x *= ph);
        }
        vecs
    }
}

impl<T: HamiltonianFamily + ?Sized> HamiltonianFamily for Box<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn label(&self) -> String {
        (**self).label()
    }

    fn evaluate(&self, s: f64) -> HermitianMatrix {
        (**self).evaluate(s)
    }

    fn evaluate_into(&self, s: f64, out: &mut HermitianMatrix) {
        (**self).evaluate_into(s, out)
    }

    fn initial_basis(&self) -> DMatrix<C64> {
        (**self).initial_basis()
    }
}

/// Uniform grid `s_k = k / (n - 1)`.
pub fn uniform_grid(n: usize) -> Vec<f64> {
    let m = (n - 1) as f64;
    (0..n).map(|k| k as f64 / m).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub label: String,
    pub dim: usize,
    pub grid_size: usize,
    pub hermiticity_defect: f64,
    pub cyclicity_defect: f64,
    pub cyclicity_tol: f64,
    pub min_gap: f64,
    /// `s` at which the smallest gap occurs.
    pub min_gap_at: f64,
    pub gap_tol: f64,
    pub max_abs_energy: f64,
}

impl ValidationReport {
    pub fn is_cyclic(&self) -> bool {
        self.cyclicity_defect <= self.cyclicity_tol
    }

    pub fn is_gapped(&self) -> bool {
        self.min_gap > self.gap_tol
    }

    pub fn passes(&self) -> bool {
        self.is_cyclic() && self.is_gapped() && self.hermiticity_defect <= HERMITIAN_REPORT_TOL
    }

    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.is_cyclic() {
            out.push(format!(
                "H(0) != H(1): max deviation {:e} > {:e}",
                self.cyclicity_defect, self.cyclicity_tol
            ));
        }
        if !self.is_gapped() {
            out.push(format!(
                "spectral gap {:e} at s = {} not above {:e}",
                self.min_gap, self.min_gap_at, self.gap_tol
            ));
        }
        if self.hermiticity_defect > HERMITIAN_REPORT_TOL {
            out.push(format!("Hermiticity defect {:e}", self.hermiticity_defect));
        }
        out
    }
}

const HERMITIAN_REPORT_TOL: f64 = crate::linalg::HERMITIAN_TOL;

/// Samples the family on a uniform grid and checks the premises the rest of
/// the crate relies on: Hermiticity, `H(0) = H(1)` and a non-vanishing gap.
///
/// `gap_tol = None` selects `1e-6 * max|eps|`.
pub fn validate_family(
    family: &dyn HamiltonianFamily,
    grid_size: usize,
    gap_tol: Option<f64>,
) -> Result<ValidationReport> {
    if grid_size < 2 {
        return Err(Error::InvalidGrid(format!(
            "grid_size must be at least 2, got {grid_size}"
        )));
    }
    let grid = uniform_grid(grid_size);
    let mut herm = 0.0f64;
    let mut min_gap = f64::INFINITY;
    let mut min_gap_at = 0.0;
    let mut max_abs_energy = 0.0f64;
    for &s in &grid {
        let h = family.evaluate(s);
        if h.dim() != family.dim() {
            return Err(Error::DimensionMismatch {
                expected: family.dim(),
                found: h.dim(),
            });
        }
        if h.as_matrix()
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        let defect = hermiticity_defect(h.as_matrix());
        herm = herm.max(defect);
        if defect > NON_HERMITIAN_LIMIT {
            return Err(Error::NonHermitianInput { defect });
        }
        let (values, _) = h.eigh();
        for w in values.windows(2) {
            let gap = w[1] - w[0];
            if gap < min_gap {
                min_gap = gap;
                min_gap_at = s;
            }
        }
        for v in &values {
            max_abs_energy = max_abs_energy.max(v.abs());
        }
    }
    let h0 = family.evaluate(0.0);
    let h1 = family.evaluate(1.0);
    let scale = h0.as_matrix().iter().map(|z| z.norm()).fold(1.0, f64::max);
    Ok(ValidationReport {
        label: family.label(),
        dim: family.dim(),
        grid_size,
        hermiticity_defect: herm,
        cyclicity_defect: max_abs_diff(h0.as_matrix(), h1.as_matrix()),
        cyclicity_tol: CYCLIC_TOL * scale,
        min_gap,
        min_gap_at,
        gap_tol: gap_tol.unwrap_or(DEFAULT_RELATIVE_GAP_TOL * max_abs_energy),
        max_abs_energy,
    })
}

/// Largest `max_k |eps(s_k)|` over a probe grid; used to size integration
/// steps.
pub fn max_spectral_radius(family: &dyn HamiltonianFamily, probes: usize) -> f64 {
    uniform_grid(probes.max(2))
        .iter()
        .map(|&s| family.evaluate(s).spectral_radius())
        .fold(0.0, f64::max)
}
