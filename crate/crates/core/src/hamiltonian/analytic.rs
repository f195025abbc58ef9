//! Families defined by code: arbitrary closures and seeded random harmonics.

use std::f64::consts::TAU;
use std::fmt;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::HamiltonianFamily;
use crate::error::{Error, Result};
use crate::linalg::{HermitianMatrix, C64};

/// Wraps a closure `s -> H(s)`.
pub struct FnFamily<F> {
    dim: usize,
    label: String,
    f: F,
}

impl<F> FnFamily<F>
where
    F: Fn(f64) -> HermitianMatrix + Send + Sync,
{
    pub fn new(dim: usize, label: impl Into<String>, f: F) -> Self {
        Self {
            dim,
            label: label.into(),
            f,
        }
    }
}

impl<F> fmt::Debug for FnFamily<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnFamily")
            .field("dim", &self.dim)
            .field("label", &self.label)
            .finish()
    }
}

impl<F> HamiltonianFamily for FnFamily<F>
where
    F: Fn(f64) -> HermitianMatrix + Send + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn label(&self) -> String {
        self.label.clone()
    }

    fn evaluate(&self, s: f64) -> HermitianMatrix {
        (self.f)(s)
    }
}

/// `H(s) = D + sum_k (A_k e^{2 pi i k s} + h.c.)` for `k = 1..=harmonics`,
/// with `D` a fixed real diagonal and `A_k` complex Gaussian matrices scaled to
/// Frobenius norm `strength`.
///
/// Keeping `2 * harmonics * strength` below half the smallest diagonal gap
/// guarantees a nondegenerate spectrum for every `s`.
#[derive(Debug, Clone)]
pub struct RandomAnalyticFamily {
    seed: u64,
    diagonal: Vec<f64>,
    harmonics: Vec<DMatrix<C64>>,
}

pub const DEFAULT_RANDOM_DIAGONAL: [f64; 3] = [-1.0, 0.0, 1.25];
pub const DEFAULT_RANDOM_STRENGTH: f64 = 0.075;

impl RandomAnalyticFamily {
    /// The three-level family with diagonal `(-1, 0, 1.25)` and two harmonics.
    pub fn three_level(seed: u64) -> Self {
        Self::new(seed, &DEFAULT_RANDOM_DIAGONAL, 2, DEFAULT_RANDOM_STRENGTH)
            .expect("default parameters are valid")
    }

    pub fn new(seed: u64, diagonal: &[f64], harmonics: usize, strength: f64) -> Result<Self> {
        let n = diagonal.len();
        if n < 2 {
            return Err(Error::InvalidParameter("need at least two levels".into()));
        }
        if !(strength.is_finite() && strength >= 0.0) {
            return Err(Error::InvalidParameter(format!("bad strength {strength}")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut mats = Vec::with_capacity(harmonics);
        for _ in 0..harmonics {
            let mut a = DMatrix::from_fn(n, n, |_, _| {
                C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
            });
            let norm = a.norm();
            if norm > 0.0 {
                a *= C64::new(strength / norm, 0.0);
            }
            mats.push(a);
        }
        Ok(Self {
            seed,
            diagonal: diagonal.to_vec(),
            harmonics: mats,
        })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

impl HamiltonianFamily for RandomAnalyticFamily {
    fn dim(&self) -> usize {
        self.diagonal.len()
    }

    fn label(&self) -> String {
        format!(
            "random_analytic(seed={}, dim={}, harmonics={})",
            self.seed,
            self.diagonal.len(),
            self.harmonics.len()
        )
    }

    fn evaluate(&self, s: f64) -> HermitianMatrix {
        let mut out = HermitianMatrix::zeros(self.dim());
        self.evaluate_into(s, &mut out);
        out
    }

    fn evaluate_into(&self, s: f64, out: &mut HermitianMatrix) {
        let n = self.dim();
        let r = s.rem_euclid(1.0);
        let m = out.as_matrix_mut();
        m.fill(C64::new(0.0, 0.0));
        for (i, d) in self.diagonal.iter().enumerate() {
            m[(i, i)] = C64::new(*d, 0.0);
        }
        for (k, a) in self.harmonics.iter().enumerate() {
            let (sp, cp) = (TAU * (k + 1) as f64 * r).sin_cos();
            let e = C64::new(cp, sp);
            for i in 0..n {
                for j in 0..n {
                    m[(i, j)] += a[(i, j)] * e + a[(j, i)].conj() * e.conj();
                }
            }
        }
    }
}
