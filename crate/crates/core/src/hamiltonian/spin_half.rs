//! Spin one-half in a magnetic field rotating once about `z` per cycle.

use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::HamiltonianFamily;
use crate::error::{Error, Result};
use crate::linalg::{HermitianMatrix, StateVector, C64};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpinHalfParams {
    /// Polar angle of the field, radians in `[0, pi]`.
    pub theta: f64,
    /// Larmor frequency, rad/us.
    pub omega0: f64,
}

impl SpinHalfParams {
    pub fn new(theta: f64, omega0: f64) -> Result<Self> {
        let p = Self { theta, omega0 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.theta.is_finite() && (0.0..=PI).contains(&self.theta)) {
            return Err(Error::InvalidParameter(format!(
                "theta must lie in [0, pi], got {}",
                self.theta
            )));
        }
        if !(self.omega0.is_finite() && self.omega0 > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "omega0 must be positive, got {}",
                self.omega0
            )));
        }
        Ok(())
    }

    /// `omega_bar = sqrt(w0^2 + 2 w0 w cos(theta) + w^2)` with `w = 2 pi / T`.
    pub fn omega_bar(&self, t: f64) -> f64 {
        let w = TAU / t;
        (self.omega0 * self.omega0 + 2.0 * self.omega0 * w * self.theta.cos() + w * w).sqrt()
    }
}

/// Azimuth `2 pi s` with `s` reduced to `[0, 1)` so that `H(1) == H(0)` exactly.
fn azimuth(s: f64) -> (f64, f64) {
    let r = s.rem_euclid(1.0);
    (TAU * r).sin_cos()
}

fn fill(params: &SpinHalfParams, s: f64, m: &mut DMatrix<C64>) {
    let (st, ct) = params.theta.sin_cos();
    let (sp, cp) = azimuth(s);
    let a = -0.5 * params.omega0;
    m[(0, 0)] = C64::new(a * ct, 0.0);
    m[(1, 1)] = C64::new(-a * ct, 0.0);
    m[(0, 1)] = C64::new(a * st * cp, -a * st * sp);
    m[(1, 0)] = C64::new(a * st * cp, a * st * sp);
}

/// `H(s) = -(w0/2) (sin(theta) cos(2 pi s) sx + sin(theta) sin(2 pi s) sy + cos(theta) sz)`.
pub fn spin_half_hamiltonian(params: &SpinHalfParams, s: f64) -> HermitianMatrix {
    let mut m = DMatrix::zeros(2, 2);
    fill(params, s, &mut m);
    HermitianMatrix::new_unchecked(m)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpinHalfEigensystem {
    pub energies: [f64; 2],
    pub vectors: [StateVector; 2],
}

/// Ground state `(cos(theta/2), sin(theta/2) e^{2 pi i s})` at `-w0/2` and
/// excited state `(sin(theta/2), -cos(theta/2) e^{2 pi i s})` at `+w0/2`.
/// This gauge is single valued in `s`.
pub fn spin_half_eigensystem(params: &SpinHalfParams, s: f64) -> SpinHalfEigensystem {
    let (sh, ch) = (0.5 * params.theta).sin_cos();
    let (sp, cp) = azimuth(s);
    let e = C64::new(cp, sp);
    let g = DVector::from_vec(vec![C64::new(ch, 0.0), e * sh]);
    let x = DVector::from_vec(vec![C64::new(sh, 0.0), -e * ch]);
    SpinHalfEigensystem {
        energies: [-0.5 * params.omega0, 0.5 * params.omega0],
        vectors: [StateVector::new_unchecked(g), StateVector::new_unchecked(x)],
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinHalfFamily {
    pub params: SpinHalfParams,
}

impl SpinHalfFamily {
    pub fn new(params: SpinHalfParams) -> Self {
        Self { params }
    }
}

impl HamiltonianFamily for SpinHalfFamily {
    fn dim(&self) -> usize {
        2
    }

    fn label(&self) -> String {
        format!(
            "spin_half(theta={}, omega0={})",
            self.params.theta, self.params.omega0
        )
    }

    fn evaluate(&self, s: f64) -> HermitianMatrix {
        spin_half_hamiltonian(&self.params, s)
    }

    fn evaluate_into(&self, s: f64, out: &mut HermitianMatrix) {
        fill(&self.params, s, out.as_matrix_mut());
    }

    /// `|e_0(0)>`, `|e_1(0)>` in the gauge of [`spin_half_eigensystem`].
    fn initial_basis(&self) -> DMatrix<C64> {
        let es = spin_half_eigensystem(&self.params, 0.0);
        DMatrix::from_columns(&[
            es.vectors[0].as_vector().clone(),
            es.vectors[1].as_vector().clone(),
        ])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermiticity_defect;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn pole_is_diagonal() {
        let p = SpinHalfParams::new(0.0, 2.0).unwrap();
        let h = spin_half_hamiltonian(&p, 0.37);
        let m = h.as_matrix();
        assert!(close(m[(0, 0)], c(-1.0, 0.0), 1e-15));
        assert!(close(m[(1, 1)], c(1.0, 0.0), 1e-15));
        assert!(m[(0, 1)].norm() < 1e-15 && m[(1, 0)].norm() < 1e-15);
    }

    #[test]
    fn equator_at_zero_is_minus_sigma_x() {
        let p = SpinHalfParams::new(PI / 2.0, 2.0).unwrap();
        let m = spin_half_hamiltonian(&p, 0.0).into_inner();
        assert!(close(m[(0, 1)], c(-1.0, 0.0), 1e-15));
        assert!(close(m[(1, 0)], c(-1.0, 0.0), 1e-15));
        assert!(m[(0, 0)].norm() < 1e-15);
    }

    #[test]
    fn quarter_turn_is_scaled_sigma_y() {
        // -(2500) sy = [[0, 2500 i], [-2500 i, 0]]
        let p = SpinHalfParams::new(PI / 2.0, 5000.0).unwrap();
        let m = spin_half_hamiltonian(&p, 0.25).into_inner();
        assert!(close(m[(0, 1)], c(0.0, 2500.0), 1e-9));
        assert!(close(m[(1, 0)], c(0.0, -2500.0), 1e-9));
        assert!(m[(0, 0)].norm() < 1e-9 && m[(1, 1)].norm() < 1e-9);
    }

    #[test]
    fn ground_state_at_pole_and_equator() {
        let p = SpinHalfParams::new(0.0, 3.0).unwrap();
        let es = spin_half_eigensystem(&p, 0.8);
        assert!(close(es.vectors[0].as_slice()[0], c(1.0, 0.0), 1e-15));
        assert!(es.vectors[0].as_slice()[1].norm() < 1e-15);
        assert_eq!(es.energies[0], -1.5);

        let p = SpinHalfParams::new(PI / 2.0, 5000.0).unwrap();
        let es = spin_half_eigensystem(&p, 0.0);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!(close(es.vectors[0].as_slice()[0], c(r, 0.0), 1e-15));
        assert!(close(es.vectors[0].as_slice()[1], c(r, 0.0), 1e-15));
        assert_eq!(es.energies[0], -2500.0);
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(SpinHalfParams::new(-0.1, 1.0).is_err());
        assert!(SpinHalfParams::new(4.0, 1.0).is_err());
        assert!(SpinHalfParams::new(1.0, 0.0).is_err());
        assert!(SpinHalfParams::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn exactly_cyclic() {
        let p = SpinHalfParams::new(1.1, 7777.0).unwrap();
        assert_eq!(
            spin_half_hamiltonian(&p, 0.0),
            spin_half_hamiltonian(&p, 1.0)
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn hermitian_traceless_with_spectrum_pm_half_omega0(
            theta in 0.0..=PI, omega0 in 1e-3..1e5f64, s in 0.0..=1.0f64
        ) {
            let p = SpinHalfParams::new(theta, omega0).unwrap();
            let h = spin_half_hamiltonian(&p, s);
            prop_assert!(hermiticity_defect(h.as_matrix()) == 0.0);
            prop_assert!(h.trace().norm() <= 1e-12 * omega0);
            let (vals, _) = h.eigh();
            prop_assert!((vals[0] + omega0 / 2.0).abs() <= 1e-12 * omega0);
            prop_assert!((vals[1] - omega0 / 2.0).abs() <= 1e-12 * omega0);
        }

        #[test]
        fn eigenpairs_have_small_residual(
            theta in 0.0..=PI, omega0 in 1e-3..1e4f64, s in 0.0..=1.0f64
        ) {
            let p = SpinHalfParams::new(theta, omega0).unwrap();
            let h = spin_half_hamiltonian(&p, s);
            let es = spin_half_eigensystem(&p, s);
            let mut out = [C64::new(0.0, 0.0); 2];
            for n in 0..2 {
                let v = es.vectors[n].as_slice();
                h.apply_into(v, &mut out);
                let r: f64 = out.iter().zip(v)
                    .map(|(a, b)| (a - b * es.energies[n]).norm_sqr()).sum::<f64>().sqrt();
                prop_assert!(r <= 1e-12 * omega0.max(1.0));
                prop_assert!((es.vectors[n].norm() - 1.0).abs() < 1e-14);
            }
            prop_assert!(es.vectors[0].inner(&es.vectors[1]).norm() < 1e-15);
        }
    }
}
