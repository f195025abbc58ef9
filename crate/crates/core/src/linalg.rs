//! Small dense complex linear algebra: Hermitian matrices, unit state vectors
//! and the sorted Hermitian eigendecomposition everything else builds on.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
pub use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

pub const I: C64 = C64::new(0.0, 1.0);

/// Entrywise tolerance for `H == H^dagger`.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Largest entrywise deviation of `m` from its conjugate transpose.
pub fn hermiticity_defect(m: &DMatrix<C64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Max-norm of `a - b`.
pub fn max_abs_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix(DMatrix<C64>);

impl HermitianMatrix {
    pub fn try_new(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        let defect = hermiticity_defect(&m);
        if defect > HERMITIAN_TOL {
            return Err(Error::NonHermitianInput { defect });
        }
        Ok(Self(m))
    }

    /// Wraps `m` without checking. Callers that accept user data should run
    /// [`crate::hamiltonian::validate_family`] before relying on Hermiticity.
    pub fn new_unchecked(m: DMatrix<C64>) -> Self {
        Self(m)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn as_matrix_mut(&mut self) -> &mut DMatrix<C64> {
        &mut self.0
    }

    pub fn into_inner(self) -> DMatrix<C64> {
        self.0
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    /// `out = H x`, without allocating.
    #[inline]
    pub fn apply_into(&self, x: &[C64], out: &mut [C64]) {
        let n = self.dim();
        let data = self.0.as_slice();
        for o in out.iter_mut() {
            *o = C64::new(0.0, 0.0);
        }
        // column-major storage
        for (j, &xj) in x.iter().enumerate().take(n) {
            let col = &data[j * n..(j + 1) * n];
            for (o, &h) in out.iter_mut().zip(col) {
                *o += h * xj;
            }
        }
    }

    /// Real expectation value `<x|H|x>` (no normalization).
    pub fn expectation(&self, x: &[C64]) -> f64 {
        let n = self.dim();
        let data = self.0.as_slice();
        let mut acc = C64::new(0.0, 0.0);
        for j in 0..n {
            let col = &data[j * n..(j + 1) * n];
            let mut hx = C64::new(0.0, 0.0);
            for (i, &h) in col.iter().enumerate() {
                hx += x[i].conj() * h;
            }
            acc += hx * x[j];
        }
        acc.re
    }

    /// Eigenvalues in ascending order with matching unit eigenvectors as
    /// columns. Eigenvector phases are whatever the solver returns.
    pub fn eigh(&self) -> (Vec<f64>, DMatrix<C64>) {
        let n = self.dim();
        let eig = SymmetricEigen::new(self.0.clone());
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
        (values, vectors)
    }

    /// Largest eigenvalue magnitude.
    pub fn spectral_radius(&self) -> f64 {
        let (values, _) = self.eigh();
        values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

/// Normalization tolerance for [`StateVector::try_new`].
pub const NORM_TOL: f64 = 1e-10;

/// A unit-norm state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector(DVector<C64>);

impl StateVector {
    pub fn try_new(v: DVector<C64>) -> Result<Self> {
        let norm = v.norm();
        if !norm.is_finite() {
            return Err(Error::NonFinite);
        }
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self(v))
    }

    pub fn from_slice(amplitudes: &[C64]) -> Result<Self> {
        Self::try_new(DVector::from_column_slice(amplitudes))
    }

    /// Rescales `v` to unit norm.
    pub fn normalized(v: DVector<C64>) -> Result<Self> {
        let norm = v.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self(v / C64::new(norm, 0.0)))
    }

    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = DVector::zeros(dim);
        v[k] = C64::new(1.0, 0.0);
        Self(v)
    }

    pub fn new_unchecked(v: DVector<C64>) -> Self {
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[C64] {
        self.0.as_slice()
    }

    pub fn as_vector(&self) -> &DVector<C64> {
        &self.0
    }

    pub fn into_inner(self) -> DVector<C64> {
        self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> C64 {
        inner(self.as_slice(), other.as_slice())
    }

    pub fn distance(&self, other: &StateVector) -> f64 {
        (&self.0 - &other.0).norm()
    }

    pub fn scaled(&self, phase: C64) -> StateVector {
        StateVector(&self.0 * phase)
    }
}

/// `<a|b>` for raw amplitude slices.
#[inline]
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm_sqr(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigh_sorts_ascending() {
        let m = DMatrix::from_row_slice(
            3,
            3,
            &[
                C64::new(3.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(-1.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(1.0, 0.0),
            ],
        );
        let h = HermitianMatrix::try_new(m).unwrap();
        let (vals, vecs) = h.eigh();
        assert_eq!(vals, vec![-1.0, 1.0, 3.0]);
        assert!((vecs[(1, 0)].norm() - 1.0).abs() < 1e-14);
        assert!((vecs[(0, 2)].norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(0.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(0.5, 0.0),
                C64::new(0.0, 0.0),
            ],
        );
        assert!(matches!(
            HermitianMatrix::try_new(m),
            Err(Error::NonHermitianInput { .. })
        ));
    }

    #[test]
    fn apply_and_expectation_agree_with_nalgebra() {
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(1.0, 0.0),
                C64::new(0.5, -0.25),
                C64::new(0.5, 0.25),
                C64::new(-2.0, 0.0),
            ],
        );
        let h = HermitianMatrix::try_new(m.clone()).unwrap();
        let x = [C64::new(0.3, 0.1), C64::new(-0.2, 0.7)];
        let mut out = [C64::new(0.0, 0.0); 2];
        h.apply_into(&x, &mut out);
        let reference = &m * DVector::from_column_slice(&x);
        assert!((out[0] - reference[0]).norm() < 1e-15);
        assert!((out[1] - reference[1]).norm() < 1e-15);
        let e = inner(&x, &out).re;
        assert!((h.expectation(&x) - e).abs() < 1e-15);
    }

    #[test]
    fn state_vector_requires_unit_norm() {
        assert!(StateVector::from_slice(&[C64::new(1.0, 0.0), C64::new(1.0, 0.0)]).is_err());
        let v = StateVector::normalized(DVector::from_vec(vec![
            C64::new(1.0, 0.0),
            C64::new(1.0, 0.0),
        ]))
        .unwrap();
        assert!((v.norm() - 1.0).abs() < 1e-15);
    }
}
