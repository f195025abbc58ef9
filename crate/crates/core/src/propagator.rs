//! Time evolution in scaled time `s = t / T`: `i d/ds |psi> = T H(s) |psi>`.
//!
//! Two routes are provided: the closed-form spin-half propagator and a
//! fixed-step classical Runge-Kutta integrator for arbitrary families. The
//! integrator evolves an ensemble of initial states together so that every
//! member sees identical Hamiltonian evaluations.

use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::{
    max_spectral_radius, EigenFrame, HamiltonianFamily, SpinHalfFamily, SpinHalfParams,
};
use crate::linalg::{norm_sqr, HermitianMatrix, StateVector, C64, I};

/// Tolerance on `sum |a_n|^2 = 1` for [`ImperfectionSpec`].
pub const AMPLITUDE_TOL: f64 = 1e-12;

/// Expansion coefficients `a_n` of the initial state in the eigenbasis of
/// `H(0)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImperfectionSpec {
    amplitudes: Vec<C64>,
}

impl ImperfectionSpec {
    pub fn try_new(amplitudes: Vec<C64>) -> Result<Self> {
        Self::with_tolerance(amplitudes, AMPLITUDE_TOL)
    }

    pub fn with_tolerance(amplitudes: Vec<C64>, tol: f64) -> Result<Self> {
        let norm_sq = norm_sqr(&amplitudes);
        if amplitudes.is_empty() || !norm_sq.is_finite() || (norm_sq - 1.0).abs() > tol {
            return Err(Error::InvalidAmplitudes { norm_sq });
        }
        Ok(Self { amplitudes })
    }

    /// The ideal preparation `a_0 = 1`.
    pub fn perfect(dim: usize) -> Self {
        let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
        amplitudes[0] = C64::new(1.0, 0.0);
        Self { amplitudes }
    }

    pub fn two_level(a0: C64, a1: C64) -> Result<Self> {
        Self::try_new(vec![a0, a1])
    }

    /// Real amplitudes `a_0 = sqrt(1 - x)`, `a_1 = sqrt(x)`.
    pub fn from_excited_weight(x: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::InvalidParameter(format!(
                "excited-state weight must lie in [0, 1], got {x}"
            )));
        }
        Self::try_new(vec![
            C64::new((1.0 - x).sqrt(), 0.0),
            C64::new(x.sqrt(), 0.0),
        ])
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn a(&self, n: usize) -> C64 {
        self.amplitudes[n]
    }

    /// `|a_n|^2`.
    pub fn weight(&self, n: usize) -> f64 {
        self.amplitudes[n].norm_sqr()
    }

    /// `sum_n a_n |e_n>` for the given columns.
    pub fn state_in(&self, basis: &DMatrix<C64>) -> Result<StateVector> {
        if basis.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.ncols(),
                found: self.dim(),
            });
        }
        let a = DVector::from_column_slice(&self.amplitudes);
        StateVector::normalized(basis * a)
    }
}

/// `a_0 = sqrt(1 - Gamma/T)`, `a_1 = sqrt(Gamma/T)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaScaling {
    /// us.
    pub gamma: f64,
    /// us.
    pub t: f64,
}

impl GammaScaling {
    pub fn new(gamma: f64, t: f64) -> Result<Self> {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "T must be positive, got {t}"
            )));
        }
        if !(gamma.is_finite() && gamma >= 0.0 && gamma <= t) {
            return Err(Error::InvalidParameter(format!(
                "Gamma must lie in [0, T] = [0, {t}], got {gamma}"
            )));
        }
        Ok(Self { gamma, t })
    }

    pub fn excited_weight(&self) -> f64 {
        self.gamma / self.t
    }

    pub fn amplitudes(&self) -> ImperfectionSpec {
        ImperfectionSpec::from_excited_weight(self.excited_weight())
            .expect("Gamma/T lies in [0, 1] by construction")
    }
}

/// Unit-norm tolerance for stored path samples.
pub const PATH_NORM_TOL: f64 = 1e-9;

/// States sampled along an evolution.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledPath {
    pub t: f64,
    pub grid: Vec<f64>,
    pub states: Vec<StateVector>,
    pub family_label: String,
}

impl SampledPath {
    pub fn new(
        t: f64,
        grid: Vec<f64>,
        states: Vec<StateVector>,
        family_label: impl Into<String>,
    ) -> Result<Self> {
        if grid.len() < 2 || grid.len() != states.len() {
            return Err(Error::InvalidGrid(format!(
                "need at least two samples with one state each (got {} and {})",
                grid.len(),
                states.len()
            )));
        }
        if grid[0] != 0.0 || *grid.last().unwrap() != 1.0 || grid.windows(2).any(|w| !(w[1] > w[0]))
        {
            return Err(Error::InvalidGrid(
                "path grid must increase strictly from 0 to 1".into(),
            ));
        }
        let dim = states[0].dim();
        for st in &states {
            if st.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: st.dim(),
                });
            }
            let norm = st.norm();
            if !norm.is_finite() {
                return Err(Error::NonFinite);
            }
            if (norm - 1.0).abs() > PATH_NORM_TOL {
                return Err(Error::NotNormalized { norm });
            }
        }
        Ok(Self {
            t,
            grid,
            states,
            family_label: family_label.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn first(&self) -> &StateVector {
        &self.states[0]
    }

    pub fn last(&self) -> &StateVector {
        self.states.last().unwrap()
    }

    /// `max_k || psi_k - other_k ||` over a common grid.
    pub fn max_distance(&self, other: &SampledPath) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::InvalidGrid(
                "paths sampled on different grids".into(),
            ));
        }
        Ok(self
            .states
            .iter()
            .zip(&other.states)
            .map(|(a, b)| a.distance(b))
            .fold(0.0, f64::max))
    }

    /// CSV with columns `s, re_0, im_0, ..., re_{N-1}, im_{N-1}`.
    pub fn write_csv(&self, w: impl Write) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let mut header = vec!["s".to_string()];
        for n in 0..self.dim() {
            header.push(format!("re_{n}"));
            header.push(format!("im_{n}"));
        }
        out.write_record(&header)?;
        for (s, st) in self.grid.iter().zip(&self.states) {
            let mut rec = vec![format!("{s:.16e}")];
            for z in st.as_slice() {
                rec.push(format!("{:.16e}", z.re));
                rec.push(format!("{:.16e}", z.im));
            }
            out.write_record(&rec)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn write_csv_file(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_csv(std::fs::File::create(path)?)
    }

    pub fn read_csv(r: impl std::io::Read, t: f64, label: impl Into<String>) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(r);
        let cols = rd.headers()?.len();
        if cols < 3 || cols % 2 == 0 {
            return Err(Error::InvalidGrid(format!(
                "bad path CSV column count {cols}"
            )));
        }
        let mut grid = Vec::new();
        let mut states = Vec::new();
        for rec in rd.records() {
            let rec = rec?;
            let num = |i: usize| -> Result<f64> {
                rec[i]
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidGrid(format!("bad number `{}`", &rec[i])))
            };
            grid.push(num(0)?);
            let amps = (0..(cols - 1) / 2)
                .map(|n| Ok(C64::new(num(1 + 2 * n)?, num(2 + 2 * n)?)))
                .collect::<Result<Vec<_>>>()?;
            states.push(StateVector::new_unchecked(DVector::from_vec(amps)));
        }
        Self::new(t, grid, states, label)
    }
}

fn check_t(t: f64) -> Result<()> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "T must be positive, got {t}"
        )));
    }
    Ok(())
}

/// Closed-form `U_T(s) = e^{-i pi s sz} exp(i (wbar T s / 2)(n_x sx + n_z sz))`.
pub fn exact_spin_half_propagator(params: &SpinHalfParams, t: f64, s: f64) -> Result<DMatrix<C64>> {
    check_t(t)?;
    let wbar = params.omega_bar(t);
    let w = 2.0 * PI / t;
    let (st, ct) = params.theta.sin_cos();
    let nx = params.omega0 * st / wbar;
    let nz = (params.omega0 * ct + w) / wbar;
    let (sa, ca) = (0.5 * wbar * t * s).sin_cos();
    // cos a + i sin a (nx sx + nz sz)
    let r00 = C64::new(ca, sa * nz);
    let r01 = C64::new(0.0, sa * nx);
    let r11 = C64::new(ca, -sa * nz);
    let em = C64::from_polar(1.0, -PI * s);
    let ep = em.conj();
    Ok(DMatrix::from_row_slice(
        2,
        2,
        &[em * r00, em * r01, ep * r01, ep * r11],
    ))
}

/// The four building blocks of the closed-form states: `U |e_0(0)>` and
/// `U |e_1(0)>` written out componentwise.
fn closed_form_columns(params: &SpinHalfParams, t: f64, s: f64) -> [[C64; 2]; 2] {
    let wbar = params.omega_bar(t);
    let w = 2.0 * PI / t;
    let (sa, ca) = (0.5 * wbar * t * s).sin_cos();
    let (sh, ch) = (0.5 * params.theta).sin_cos();
    let plus = (params.omega0 + w) / wbar;
    let minus = (params.omega0 - w) / wbar;
    let em = C64::from_polar(1.0, -PI * s);
    let ep = em.conj();
    let g = [
        C64::new(ca, plus * sa) * ch * em,
        C64::new(ca, minus * sa) * sh * ep,
    ];
    let x = [
        C64::new(ca, -minus * sa) * sh * em,
        -C64::new(ca, -plus * sa) * ch * ep,
    ];
    [g, x]
}

/// Evolved ground state, written out in closed form.
pub fn exact_perfect_state(params: &SpinHalfParams, t: f64, s: f64) -> Result<StateVector> {
    check_t(t)?;
    let [g, _] = closed_form_columns(params, t, s);
    Ok(StateVector::new_unchecked(DVector::from_vec(g.to_vec())))
}

/// Evolution of `a_0 |e_0(0)> + a_1 |e_1(0)>` in closed form.
pub fn exact_imperfect_state(
    params: &SpinHalfParams,
    t: f64,
    a0: C64,
    a1: C64,
    s: f64,
) -> Result<StateVector> {
    check_t(t)?;
    check_two_level(a0, a1)?;
    let [g, x] = closed_form_columns(params, t, s);
    Ok(StateVector::new_unchecked(DVector::from_vec(vec![
        a0 * g[0] + a1 * x[0],
        a0 * g[1] + a1 * x[1],
    ])))
}

/// Normalization tolerance for user-supplied two-level amplitudes.
pub const TWO_LEVEL_AMPLITUDE_TOL: f64 = 1e-10;

pub(crate) fn check_two_level(a0: C64, a1: C64) -> Result<()> {
    let norm_sq = a0.norm_sqr() + a1.norm_sqr();
    if !norm_sq.is_finite() || (norm_sq - 1.0).abs() > TWO_LEVEL_AMPLITUDE_TOL {
        return Err(Error::InvalidAmplitudes { norm_sq });
    }
    Ok(())
}

/// Closed-form path on `grid_size` uniform points.
pub fn exact_spin_half_path(
    params: &SpinHalfParams,
    t: f64,
    a0: C64,
    a1: C64,
    grid_size: usize,
) -> Result<SampledPath> {
    let grid = crate::hamiltonian::uniform_grid(grid_size);
    let states = grid
        .iter()
        .map(|&s| exact_imperfect_state(params, t, a0, a1, s))
        .collect::<Result<Vec<_>>>()?;
    SampledPath::new(
        t,
        grid,
        states,
        format!(
            "spin_half(theta={}, omega0={})",
            params.theta, params.omega0
        ),
    )
}

/// Default phase advance `T |eps|_max h` per integration step, radians.
pub const DEFAULT_MAX_PHASE_PER_STEP: f64 = 0.005;

/// Integration is refused above this phase advance per step.
pub const STEP_PHASE_LIMIT: f64 = 0.3;

pub const DEFAULT_OUTPUT_POINTS: usize = 2001;

/// Number of probe points used to estimate `max_s |eps(s)|`.
const SPECTRAL_PROBES: usize = 257;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorSettings {
    /// Target phase advance per step; sets the step count when `steps` is
    /// `None`.
    pub max_phase_per_step: f64,
    /// Points of the recorded output grid (uniform, including both ends).
    pub output_points: usize,
    /// Fixed step count (rounded up to a multiple of `output_points - 1`).
    pub steps: Option<usize>,
}

impl Default for IntegratorSettings {
    fn default() -> Self {
        Self {
            max_phase_per_step: DEFAULT_MAX_PHASE_PER_STEP,
            output_points: DEFAULT_OUTPUT_POINTS,
            steps: None,
        }
    }
}

impl IntegratorSettings {
    pub fn with_output_points(output_points: usize) -> Self {
        Self {
            output_points,
            ..Self::default()
        }
    }

    /// Step count for the interval `[s0, s1]` at time scale `t` with
    /// spectral radius `radius`.
    pub fn step_count(&self, t: f64, radius: f64, span: f64) -> usize {
        let intervals = self.output_points - 1;
        let raw = match self.steps {
            Some(n) => n.max(1),
            None => (t * radius * span / self.max_phase_per_step)
                .ceil()
                .max(1.0) as usize,
        };
        raw.div_ceil(intervals) * intervals
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegrationStats {
    pub steps: usize,
    pub step_size: f64,
    /// `T |eps|_max h`.
    pub phase_per_step: f64,
    /// Largest `| ||psi|| - 1 |` seen before a renormalization.
    pub max_norm_drift: f64,
}

/// One evolved member of an ensemble.
#[derive(Debug, Clone)]
pub struct Evolution {
    pub path: SampledPath,
    /// `T int <psi|H|psi> ds` by the trapezoidal rule on the integration grid.
    pub dynamical_term: f64,
}

/// Integrates `psi0` over `[0, 1]` and records `grid_size` uniform samples.
pub fn integrate_schrodinger(
    family: &dyn HamiltonianFamily,
    t: f64,
    psi0: &StateVector,
    grid_size: usize,
) -> Result<SampledPath> {
    let settings = IntegratorSettings::with_output_points(grid_size);
    let (mut out, _) = evolve_ensemble(family, t, std::slice::from_ref(psi0), &settings)?;
    Ok(out.pop().unwrap().path)
}

/// Integrates every initial state over `[0, 1]` with shared steps.
pub fn evolve_ensemble(
    family: &dyn HamiltonianFamily,
    t: f64,
    initial: &[StateVector],
    settings: &IntegratorSettings,
) -> Result<(Vec<Evolution>, IntegrationStats)> {
    evolve_interval(family, t, initial, 0.0, 1.0, settings)
}

/// Integrates every initial state over `[s0, s1]`. The recorded grid runs
/// from `s0` to `s1`; [`SampledPath`] requires `[0, 1]`, so for partial
/// intervals the raw samples are returned through [`evolve_interval_raw`].
pub fn evolve_interval(
    family: &dyn HamiltonianFamily,
    t: f64,
    initial: &[StateVector],
    s0: f64,
    s1: f64,
    settings: &IntegratorSettings,
) -> Result<(Vec<Evolution>, IntegrationStats)> {
    let raw = evolve_interval_raw(family, t, initial, s0, s1, settings)?;
    let label = family.label();
    let evolutions = raw
        .states
        .into_iter()
        .zip(raw.dynamical_terms)
        .map(|(states, dynamical_term)| {
            Ok(Evolution {
                path: SampledPath::new(t, raw.grid.clone(), states, label.clone())?,
                dynamical_term,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((evolutions, raw.stats))
}

#[derive(Debug, Clone)]
pub struct RawEvolution {
    pub grid: Vec<f64>,
    /// `states[member][sample]`.
    pub states: Vec<Vec<StateVector>>,
    pub dynamical_terms: Vec<f64>,
    pub stats: IntegrationStats,
}

/// Fixed-step RK4 on `i d/ds psi = T H(s) psi` with renormalization after
/// every step.
pub fn evolve_interval_raw(
    family: &dyn HamiltonianFamily,
    t: f64,
    initial: &[StateVector],
    s0: f64,
    s1: f64,
    settings: &IntegratorSettings,
) -> Result<RawEvolution> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "T must be non-negative, got {t}"
        )));
    }
    if !(s1 > s0) {
        return Err(Error::InvalidGrid(format!("empty interval [{s0}, {s1}]")));
    }
    if settings.output_points < 2 {
        return Err(Error::InvalidGrid("need at least 2 output points".into()));
    }
    if initial.is_empty() {
        return Err(Error::InvalidParameter("no initial states".into()));
    }
    let n = family.dim();
    for psi in initial {
        if psi.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: psi.dim(),
            });
        }
    }
    let span = s1 - s0;
    let radius = max_spectral_radius(family, SPECTRAL_PROBES);
    let steps = settings.step_count(t, radius, span);
    let h = span / steps as f64;
    let phase_per_step = t * radius * h;
    if phase_per_step > STEP_PHASE_LIMIT {
        return Err(Error::StepTooLarge {
            phase: phase_per_step,
            limit: STEP_PHASE_LIMIT,
        });
    }
    let stride = steps / (settings.output_points - 1);
    let members = initial.len();
    let len = members * n;

    let mut psi: Vec<C64> = initial
        .iter()
        .flat_map(|p| p.as_slice().iter().copied())
        .collect();
    let mut k1 = vec![C64::new(0.0, 0.0); len];
    let mut k2 = k1.clone();
    let mut k3 = k1.clone();
    let mut k4 = k1.clone();
    let mut tmp = k1.clone();

    let mut h_start = HermitianMatrix::zeros(n);
    let mut h_mid = HermitianMatrix::zeros(n);
    let mut h_end = HermitianMatrix::zeros(n);
    family.evaluate_into(s0, &mut h_start);

    let intervals = (settings.output_points - 1) as f64;
    let grid: Vec<f64> = (0..settings.output_points)
        .map(|j| {
            if j == settings.output_points - 1 {
                s1
            } else {
                s0 + span * (j as f64 / intervals)
            }
        })
        .collect();
    let mut states: Vec<Vec<StateVector>> = (0..members)
        .map(|_| Vec::with_capacity(settings.output_points))
        .collect();
    let record = |psi: &[C64], states: &mut Vec<Vec<StateVector>>| {
        for (m, st) in states.iter_mut().enumerate() {
            st.push(StateVector::new_unchecked(DVector::from_column_slice(
                &psi[m * n..(m + 1) * n],
            )));
        }
    };
    record(&psi, &mut states);

    let mut energy_prev: Vec<f64> = (0..members)
        .map(|m| h_start.expectation(&psi[m * n..(m + 1) * n]))
        .collect();
    let mut dynamical = vec![0.0; members];
    let mut max_drift = 0.0f64;
    let scale = C64::new(0.0, -t);

    for step in 0..steps {
        let s = s0 + step as f64 * h;
        let s_next = if step + 1 == steps { s1 } else { s + h };
        family.evaluate_into(s + 0.5 * h, &mut h_mid);
        family.evaluate_into(s_next, &mut h_end);

        deriv(&h_start, &psi, &mut k1, n, scale);
        axpy(&psi, &k1, 0.5 * h, &mut tmp);
        deriv(&h_mid, &tmp, &mut k2, n, scale);
        axpy(&psi, &k2, 0.5 * h, &mut tmp);
        deriv(&h_mid, &tmp, &mut k3, n, scale);
        axpy(&psi, &k3, h, &mut tmp);
        deriv(&h_end, &tmp, &mut k4, n, scale);
        let c = h / 6.0;
        for i in 0..len {
            psi[i] += (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]) * c;
        }

        for m in 0..members {
            let chunk = &mut psi[m * n..(m + 1) * n];
            let norm = norm_sqr(chunk).sqrt();
            if !norm.is_finite() {
                return Err(Error::NonFinite);
            }
            max_drift = max_drift.max((norm - 1.0).abs());
            let inv = 1.0 / norm;
            for z in chunk.iter_mut() {
                *z *= inv;
            }
            let e = h_end.expectation(chunk);
            dynamical[m] += 0.5 * (s_next - s) * t * (energy_prev[m] + e);
            energy_prev[m] = e;
        }

        if (step + 1) % stride == 0 {
            record(&psi, &mut states);
        }
        std::mem::swap(&mut h_start, &mut h_end);
    }

    Ok(RawEvolution {
        grid,
        states,
        dynamical_terms: dynamical,
        stats: IntegrationStats {
            steps,
            step_size: h,
            phase_per_step,
            max_norm_drift: max_drift,
        },
    })
}

#[inline]
fn deriv(h: &HermitianMatrix, psi: &[C64], out: &mut [C64], n: usize, scale: C64) {
    for (x, o) in psi.chunks_exact(n).zip(out.chunks_exact_mut(n)) {
        h.apply_into(x, o);
        for z in o.iter_mut() {
            *z *= scale;
        }
    }
}

#[inline]
fn axpy(x: &[C64], k: &[C64], a: f64, out: &mut [C64]) {
    for ((o, xi), ki) in out.iter_mut().zip(x).zip(k) {
        *o = xi + ki * a;
    }
}

/// `e^{-i T int_0^s eps_n} e^{i gamma_n(s)} |e_n(s)>`, interpolated linearly
/// between frame samples.
pub fn adiabatic_reference_state(
    frame: &EigenFrame,
    t: f64,
    n: usize,
    s: f64,
) -> Result<StateVector> {
    frame.berry_accumulator(n)?;
    let (k, u) = frame.locate(s);
    let grid = frame.grid();
    let integral = frame.energy_integral(n);
    let e0 = frame.energy(k, n);
    let e1 = frame.energy(k + 1, n);
    let ds = u * (grid[k + 1] - grid[k]);
    let e_s = e0 + u * (e1 - e0);
    let phase_int = integral[k] + 0.5 * ds * (e0 + e_s);
    let a = frame.transported(k, n);
    let b = frame.transported(k + 1, n);
    let v: Vec<C64> = a
        .iter()
        .zip(&b)
        .map(|(x, y)| x * (1.0 - u) + y * u)
        .collect();
    let v = DVector::from_vec(v) * C64::from_polar(1.0, -t * phase_int);
    StateVector::normalized(v)
}

/// `sum_n a_n` times the adiabatic reference state of level `n`.
pub fn adiabatic_superposition(
    frame: &EigenFrame,
    t: f64,
    amplitudes: &ImperfectionSpec,
    s: f64,
) -> Result<StateVector> {
    if amplitudes.dim() != frame.dim() {
        return Err(Error::DimensionMismatch {
            expected: frame.dim(),
            found: amplitudes.dim(),
        });
    }
    let mut acc = DVector::zeros(frame.dim());
    for n in 0..frame.dim() {
        let r = adiabatic_reference_state(frame, t, n, s)?;
        acc += r.into_inner() * amplitudes.a(n);
    }
    StateVector::normalized(acc)
}

/// `|e_0(0)>`, `|e_1(0)>` of the spin-half model as basis columns.
pub fn spin_half_initial_basis(params: &SpinHalfParams) -> DMatrix<C64> {
    SpinHalfFamily::new(*params).initial_basis()
}

/// `exp(-i T s H)` applied to `psi` for a constant Hamiltonian given by its
/// eigendecomposition; used as an oracle.
pub fn constant_hamiltonian_evolution(
    h: &HermitianMatrix,
    t: f64,
    s: f64,
    psi: &StateVector,
) -> StateVector {
    let (vals, vecs) = h.eigh();
    let coeffs = vecs.adjoint() * psi.as_vector();
    let phased = DVector::from_iterator(
        vals.len(),
        vals.iter()
            .zip(coeffs.iter())
            .map(|(e, c)| c * (-I * t * s * e).exp()),
    );
    StateVector::new_unchecked(vecs * phased)
}
