//! Instantaneous eigenframes on a grid, in a smooth single-valued gauge, with
//! their Berry-phase accumulators.

use nalgebra::DMatrix;

use super::{uniform_grid, HamiltonianFamily};
use crate::error::{Error, Result};
use crate::linalg::{inner, HermitianMatrix, C64};

pub const DEFAULT_GRID_SIZE: usize = 2001;

/// Smallest `|<e_n(s_{k-1})|e_n(s_k)>|` accepted while following a level.
pub const CONTINUATION_MIN_OVERLAP: f64 = 0.5;

/// A component whose modulus stays above this along the loop may be used to
/// fix the gauge (made real and positive).
const REFERENCE_COMPONENT_MIN: f64 = 1e-3;

/// How the phase of level `n` was fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameGauge {
    /// Component `c` is real and positive at every sample.
    ReferenceComponent(usize),
    /// Parallel continuation followed by a linear phase twist closing the loop.
    TwistedContinuation,
}

#[derive(Debug, Clone)]
pub struct EigenFrame {
    dim: usize,
    grid: Vec<f64>,
    uniform: bool,
    /// `energies[k][n]`, ascending in `n`.
    energies: Vec<Vec<f64>>,
    /// `vectors[k][n * dim .. (n + 1) * dim]` is `|e_n(s_k)>`.
    vectors: Vec<Vec<C64>>,
    /// `berry[n][k] = gamma_n(s_k)`.
    berry: Vec<Vec<f64>>,
    gauges: Vec<FrameGauge>,
}

/// Diagonalizes `family` on a uniform grid of `grid_size` points and builds the
/// frame. Run [`super::validate_family`] first for a proper diagnosis of
/// degenerate input.
pub fn smooth_eigenframe(family: &dyn HamiltonianFamily, grid_size: usize) -> Result<EigenFrame> {
    if grid_size < 3 {
        return Err(Error::InvalidGrid(format!(
            "eigenframe needs at least 3 samples, got {grid_size}"
        )));
    }
    let grid = uniform_grid(grid_size);
    let mut energies = Vec::with_capacity(grid_size);
    let mut vectors = Vec::with_capacity(grid_size);
    let mut h = HermitianMatrix::zeros(family.dim());
    for &s in &grid {
        family.evaluate_into(s, &mut h);
        let (vals, vecs) = h.eigh();
        energies.push(vals);
        vectors.push(vecs);
    }
    EigenFrame::from_samples(grid, energies, vectors)
}

/// `gamma_n(1)`.
pub fn berry_phase(frame: &EigenFrame, n: usize) -> Result<f64> {
    frame.berry_phase(n)
}

impl EigenFrame {
    /// Builds a frame from eigenpairs already computed on `grid`
    /// (`vectors[k]` holds `|e_n(s_k)>` as column `n`). Input phases are
    /// arbitrary; the frame fixes its own gauge.
    pub fn from_samples(
        grid: Vec<f64>,
        energies: Vec<Vec<f64>>,
        vectors: Vec<DMatrix<C64>>,
    ) -> Result<Self> {
        let len = grid.len();
        if len < 3 || energies.len() != len || vectors.len() != len {
            return Err(Error::InvalidGrid(format!(
                "need matching grid/energies/vectors of length >= 3 (got {}, {}, {})",
                len,
                energies.len(),
                vectors.len()
            )));
        }
        if grid[0] != 0.0 || grid[len - 1] != 1.0 || grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidGrid(
                "grid must increase strictly from 0 to 1".into(),
            ));
        }
        let dim = vectors[0].nrows();
        for (e, v) in energies.iter().zip(&vectors) {
            if e.len() != dim || v.nrows() != dim || v.ncols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: e.len().max(v.ncols()),
                });
            }
        }
        let h0 = grid[1] - grid[0];
        let uniform = grid
            .windows(2)
            .all(|w| ((w[1] - w[0]) - h0).abs() <= 1e-9 * h0);

        let mut levels: Vec<Vec<Vec<C64>>> = Vec::with_capacity(dim);
        let mut gauges = Vec::with_capacity(dim);
        let mut berry = Vec::with_capacity(dim);
        for n in 0..dim {
            let raw: Vec<Vec<C64>> = vectors
                .iter()
                .map(|m| m.column(n).iter().copied().collect())
                .collect();
            for k in 1..len {
                let ov = inner(&raw[k - 1], &raw[k]).norm();
                if ov < CONTINUATION_MIN_OVERLAP {
                    return Err(Error::GapTooSmall {
                        level: n,
                        sample: k,
                        overlap: ov,
                    });
                }
            }
            let (w, gauge) = fix_gauge(raw, &grid);
            berry.push(accumulate(&w, &grid, uniform));
            levels.push(w);
            gauges.push(gauge);
        }

        let vectors = (0..len)
            .map(|k| levels.iter().flat_map(|lv| lv[k].iter().copied()).collect())
            .collect();
        Ok(Self {
            dim,
            grid,
            uniform,
            energies,
            vectors,
            berry,
            gauges,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of samples (`M + 1`).
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn is_uniform(&self) -> bool {
        self.uniform
    }

    pub fn gauge(&self, n: usize) -> FrameGauge {
        self.gauges[n]
    }

    pub fn energy(&self, k: usize, n: usize) -> f64 {
        self.energies[k][n]
    }

    pub fn energies_at(&self, k: usize) -> &[f64] {
        &self.energies[k]
    }

    /// `|e_n(s_k)>` in the frame gauge.
    pub fn vector(&self, k: usize, n: usize) -> &[C64] {
        &self.vectors[k][n * self.dim..(n + 1) * self.dim]
    }

    /// Eigenvectors at sample `k` as the columns of a matrix.
    pub fn vectors_at(&self, k: usize) -> DMatrix<C64> {
        DMatrix::from_column_slice(self.dim, self.dim, &self.vectors[k])
    }

    fn check_level(&self, n: usize) -> Result<()> {
        if n >= self.dim {
            return Err(Error::IndexOutOfRange {
                index: n,
                len: self.dim,
            });
        }
        Ok(())
    }

    /// `gamma_n(s_k)` for every sample; `gamma_n(0) = 0`.
    pub fn berry_accumulator(&self, n: usize) -> Result<&[f64]> {
        self.check_level(n)?;
        Ok(&self.berry[n])
    }

    /// Unwrapped `gamma_n(1)`. Only its value modulo `2 pi` is gauge
    /// invariant; the multiple of `2 pi` reflects the winding of the stored
    /// gauge.
    pub fn berry_phase(&self, n: usize) -> Result<f64> {
        Ok(*self.berry_accumulator(n)?.last().unwrap())
    }

    /// `e^{i gamma_n(s_k)} |e_n(s_k)>`, the parallel-transported eigenvector.
    pub fn transported(&self, k: usize, n: usize) -> Vec<C64> {
        let ph = C64::from_polar(1.0, self.berry[n][k]);
        self.vector(k, n).iter().map(|z| z * ph).collect()
    }

    /// `|| |e_n(1)> - |e_n(0)> ||`.
    pub fn cyclic_gauge_defect(&self, n: usize) -> f64 {
        let a = self.vector(0, n);
        let b = self.vector(self.len() - 1, n);
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Smallest adjacent-level gap over all samples.
    pub fn min_gap(&self) -> f64 {
        self.energies
            .iter()
            .flat_map(|e| e.windows(2).map(|w| w[1] - w[0]))
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest spread `max_n eps_n - min_n eps_n` over the samples.
    pub fn max_spread(&self) -> f64 {
        self.energies
            .iter()
            .map(|e| e[e.len() - 1] - e[0])
            .fold(0.0, f64::max)
    }

    /// `max_{k,n} ||H(s_k) e_n - eps_n e_n||`.
    pub fn max_eigen_residual(&self, family: &dyn HamiltonianFamily) -> f64 {
        let mut out = vec![C64::new(0.0, 0.0); self.dim];
        let mut worst = 0.0f64;
        for (k, &s) in self.grid.iter().enumerate() {
            let h = family.evaluate(s);
            for n in 0..self.dim {
                let v = self.vector(k, n);
                h.apply_into(v, &mut out);
                let e = self.energies[k][n];
                let r: f64 = out
                    .iter()
                    .zip(v)
                    .map(|(a, b)| (a - b * e).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                worst = worst.max(r);
            }
        }
        worst
    }

    /// Neighbours of sample `k` on the periodic grid and the signed distances
    /// to them.
    fn periodic_neighbours(&self, k: usize) -> (usize, usize, f64, f64) {
        let last = self.len() - 1;
        let (prev, hm) = if k == 0 {
            (last - 1, self.grid[0] + 1.0 - self.grid[last - 1])
        } else {
            (k - 1, self.grid[k] - self.grid[k - 1])
        };
        let (next, hp) = if k == last {
            (1, self.grid[1] + 1.0 - self.grid[last])
        } else {
            (k + 1, self.grid[k + 1] - self.grid[k])
        };
        (prev, next, hm, hp)
    }

    /// `<e_m(s_k)| d/ds |e_n(s_k)>` by a three-point difference on the
    /// periodic grid.
    pub fn derivative_overlap(&self, k: usize, m: usize, n: usize) -> C64 {
        let (prev, next, hm, hp) = self.periodic_neighbours(k);
        let cm = -hp / (hm * (hm + hp));
        let c0 = (hp - hm) / (hm * hp);
        let cp = hm / (hp * (hm + hp));
        let bra = self.vector(k, m);
        inner(bra, self.vector(prev, n)) * cm
            + inner(bra, self.vector(k, n)) * c0
            + inner(bra, self.vector(next, n)) * cp
    }

    /// `max_k |<e_m| d/ds e_n>|`.
    pub fn max_derivative_overlap(&self, m: usize, n: usize) -> f64 {
        (0..self.len())
            .map(|k| self.derivative_overlap(k, m, n).norm())
            .fold(0.0, f64::max)
    }

    /// Cumulative trapezoidal `int_0^{s_k} eps_n ds`.
    pub fn energy_integral(&self, n: usize) -> Vec<f64> {
        let mut acc = 0.0;
        let mut out = Vec::with_capacity(self.len());
        out.push(0.0);
        for k in 1..self.len() {
            let h = self.grid[k] - self.grid[k - 1];
            acc += 0.5 * h * (self.energies[k - 1][n] + self.energies[k][n]);
            out.push(acc);
        }
        out
    }

    /// Index `k` with `s_k <= s <= s_{k+1}` and the fraction within it.
    pub fn locate(&self, s: f64) -> (usize, f64) {
        let s = s.clamp(0.0, 1.0);
        let k = self
            .grid
            .partition_point(|&g| g <= s)
            .clamp(1, self.len() - 1)
            - 1;
        let t = (s - self.grid[k]) / (self.grid[k + 1] - self.grid[k]);
        (k, t)
    }
}

fn fix_gauge(raw: Vec<Vec<C64>>, grid: &[f64]) -> (Vec<Vec<C64>>, FrameGauge) {
    let dim = raw[0].len();
    let mut best = (0usize, -1.0f64);
    for c in 0..dim {
        let min = raw
            .iter()
            .map(|v| v[c].norm())
            .fold(f64::INFINITY, f64::min);
        if min > best.1 + 1e-12 {
            best = (c, min);
        }
    }
    if best.1 >= REFERENCE_COMPONENT_MIN {
        let c = best.0;
        let w = raw
            .into_iter()
            .map(|v| {
                let z = v[c];
                let ph = z.conj() / z.norm();
                v.into_iter().map(|x| x * ph).collect()
            })
            .collect();
        return (w, FrameGauge::ReferenceComponent(c));
    }

    let mut v: Vec<Vec<C64>> = Vec::with_capacity(raw.len());
    let mut it = raw.into_iter();
    let first = it.next().unwrap();
    let big = (0..dim)
        .max_by(|&a, &b| first[a].norm().total_cmp(&first[b].norm()))
        .unwrap();
    let ph = first[big].conj() / first[big].norm();
    v.push(first.into_iter().map(|x| x * ph).collect());
    for next in it {
        let ov = inner(v.last().unwrap(), &next);
        let ph = ov.conj() / ov.norm();
        v.push(next.into_iter().map(|x| x * ph).collect());
    }
    let last = v.len() - 1;
    let closing = inner(&v[0], &v[last]).arg();
    let w = v
        .into_iter()
        .zip(grid)
        .map(|(vk, &s)| {
            let ph = C64::from_polar(1.0, -closing * s);
            vk.into_iter().map(|x| x * ph).collect()
        })
        .collect();
    (w, FrameGauge::TwistedContinuation)
}

/// `gamma(s_k) = -sum_{j<=k} arg <w_{j-1}|w_j>`, with the loop total lifted to
/// fourth order by Richardson extrapolation against the every-other-sample
/// sum when the grid allows it. The correction is spread linearly in `s`.
fn accumulate(w: &[Vec<C64>], grid: &[f64], uniform: bool) -> Vec<f64> {
    let len = w.len();
    let mut gamma = Vec::with_capacity(len);
    gamma.push(0.0);
    let mut acc = 0.0;
    for j in 1..len {
        acc -= inner(&w[j - 1], &w[j]).arg();
        gamma.push(acc);
    }
    let intervals = len - 1;
    if uniform && intervals.is_multiple_of(2) && intervals >= 4 {
        let coarse: f64 = (0..intervals / 2)
            .map(|j| -inner(&w[2 * j], &w[2 * j + 2]).arg())
            .sum();
        let fine = gamma[intervals];
        let delta = (4.0 * fine - coarse) / 3.0 - fine;
        for (g, &s) in gamma.iter_mut().zip(grid).skip(1) {
            *g += delta * s;
        }
    }
    gamma
}
