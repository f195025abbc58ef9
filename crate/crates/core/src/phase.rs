//! Geometric-phase functionals.
//!
//! For a path `psi(s)`, `s` in `[0, 1]`, generated by `i d/ds psi = T H psi`,
//!
//! ```text
//! gamma = arg <psi(0)|psi(1)> + T int_0^1 <psi|H|psi> ds      (mod 2 pi)
//! ```
//!
//! Phases are compared after wrapping to `[0, 2 pi)`; raw values are kept in
//! [`PhaseReport`] too.

use std::f64::consts::{PI, TAU};

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::{EigenFrame, HamiltonianFamily, SpinHalfParams};
use crate::linalg::{HermitianMatrix, StateVector, C64};
use crate::propagator::{
    check_two_level, evolve_ensemble, Evolution, ImperfectionSpec, IntegratorSettings, SampledPath,
};

/// `x - 2 pi floor(x / 2 pi)`, in `[0, 2 pi)`.
pub fn wrap_phase(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(wrap(x))
}

/// Infallible [`wrap_phase`]; non-finite input propagates as NaN.
pub fn wrap(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Distance between two phases on the circle, in `[0, pi]`.
pub fn phase_distance(a: f64, b: f64) -> f64 {
    let d = wrap(a - b);
    d.min(TAU - d)
}

/// Overlaps below this modulus make `arg <psi_0|psi_1>` meaningless.
pub const ILL_CONDITIONED_OVERLAP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseMethod {
    /// Total phase plus the `T int <H>` line integral.
    Continuous,
    /// Products of neighbouring overlaps.
    PancharatnamDiscrete,
    ExactClosedForm,
    Approximation,
    /// Minus half the enclosed solid angle on the Bloch sphere.
    SolidAngle,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseReport {
    /// `arg <psi_0|psi_last>` in `(-pi, pi]`.
    pub total_phase: f64,
    /// The term added to `total_phase`: `T int <H> ds` for the continuous
    /// form, `-sum arg <psi_k|psi_k+1>` for the discrete one.
    pub dynamical_term: f64,
    pub geometric_phase_wrapped: f64,
    pub method: PhaseMethod,
    /// `|<psi_0|psi_last>|` was below [`ILL_CONDITIONED_OVERLAP`]; the total
    /// phase was set to 0.
    pub ill_conditioned_arg: bool,
}

impl PhaseReport {
    pub fn new(total_phase: f64, dynamical_term: f64, method: PhaseMethod) -> Self {
        Self {
            total_phase,
            dynamical_term,
            geometric_phase_wrapped: wrap(total_phase + dynamical_term),
            method,
            ill_conditioned_arg: false,
        }
    }

    fn from_overlap(overlap: C64, dynamical_term: f64, method: PhaseMethod) -> Self {
        if overlap.norm() < ILL_CONDITIONED_OVERLAP {
            let mut r = Self::new(0.0, dynamical_term, method);
            r.ill_conditioned_arg = true;
            return r;
        }
        Self::new(overlap.arg(), dynamical_term, method)
    }

    /// `total_phase + dynamical_term` before wrapping.
    pub fn unwrapped(&self) -> f64 {
        self.total_phase + self.dynamical_term
    }
}

/// Largest change of `<H>` between neighbouring samples, relative to the
/// spectral spread, accepted by [`geometric_phase_continuous`].
pub const MAX_EXPECTATION_JUMP: f64 = 0.1;

/// Continuous form on the path's own grid. The line integral uses composite
/// Simpson on uniform grids with an even number of intervals and the
/// trapezoidal rule otherwise.
pub fn geometric_phase_continuous(
    path: &SampledPath,
    family: &dyn HamiltonianFamily,
) -> Result<PhaseReport> {
    if path.dim() != family.dim() {
        return Err(Error::DimensionMismatch {
            expected: family.dim(),
            found: path.dim(),
        });
    }
    let mut h = HermitianMatrix::zeros(family.dim());
    let mut values = Vec::with_capacity(path.len());
    let mut spreads = Vec::with_capacity(path.len());
    for (&s, psi) in path.grid.iter().zip(&path.states) {
        family.evaluate_into(s, &mut h);
        values.push(h.expectation(psi.as_slice()));
        let (ev, _) = h.eigh();
        spreads.push(ev[ev.len() - 1] - ev[0]);
    }
    for k in 1..values.len() {
        let jump = (values[k] - values[k - 1]).abs();
        let scale = spreads[k].max(spreads[k - 1]);
        if jump > MAX_EXPECTATION_JUMP * scale {
            return Err(Error::GridTooCoarse(format!(
                "<H> changes by {jump:.3e} between s = {} and s = {} (spectral spread {scale:.3e})",
                path.grid[k - 1],
                path.grid[k]
            )));
        }
    }
    let integral = integrate_samples(&path.grid, &values);
    Ok(PhaseReport::from_overlap(
        path.first().inner(path.last()),
        path.t * integral,
        PhaseMethod::Continuous,
    ))
}

/// Composite Simpson on a uniform grid with an even number of intervals,
/// trapezoid otherwise.
pub fn integrate_samples(grid: &[f64], values: &[f64]) -> f64 {
    let m = grid.len() - 1;
    let h = grid[1] - grid[0];
    let uniform = grid
        .windows(2)
        .all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h);
    if uniform && m >= 2 && m.is_multiple_of(2) {
        let mut acc = values[0] + values[m];
        for (k, v) in values.iter().enumerate().take(m).skip(1) {
            acc += if k % 2 == 1 { 4.0 * v } else { 2.0 * v };
        }
        acc * h / 3.0
    } else {
        trapezoid(grid, values)
    }
}

pub fn trapezoid(grid: &[f64], values: &[f64]) -> f64 {
    grid.windows(2)
        .zip(values.windows(2))
        .map(|(g, v)| 0.5 * (g[1] - g[0]) * (v[0] + v[1]))
        .sum()
}

/// Neighbouring samples with overlap modulus at or below this are rejected.
pub const MIN_NEIGHBOUR_OVERLAP: f64 = 0.1;

/// `wrap(arg <psi_0|psi_last> - sum_k arg <psi_k|psi_k+1>)`.
///
/// The overlap sum converges quadratically in the sample spacing. On uniform
/// grids with an even number of intervals it is combined with the sum over
/// every other sample, `(4 S_h - S_2h) / 3`, which removes the leading error
/// term; [`pancharatnam_raw`] gives the plain sum.
pub fn geometric_phase_pancharatnam(path: &SampledPath) -> Result<PhaseReport> {
    let m = path.len() - 1;
    let h = path.grid[1] - path.grid[0];
    let uniform = path
        .grid
        .windows(2)
        .all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h);
    if uniform && m >= 4 && m.is_multiple_of(2) {
        pancharatnam_extrapolated(&path.states)
    } else {
        pancharatnam_raw(&path.states)
    }
}

fn overlap_arg_sum(states: &[StateVector], stride: usize) -> Result<f64> {
    let mut sum = 0.0;
    let mut k = 0;
    while k + stride < states.len() {
        let ov = states[k].inner(&states[k + stride]);
        if ov.norm() <= MIN_NEIGHBOUR_OVERLAP {
            return Err(Error::OrthogonalNeighbors {
                index: k,
                overlap: ov.norm(),
            });
        }
        sum += ov.arg();
        k += stride;
    }
    Ok(sum)
}

pub fn pancharatnam_raw(states: &[StateVector]) -> Result<PhaseReport> {
    if states.len() < 2 {
        return Err(Error::InvalidGrid("need at least two states".into()));
    }
    let sum = overlap_arg_sum(states, 1)?;
    Ok(PhaseReport::from_overlap(
        states[0].inner(states.last().unwrap()),
        -sum,
        PhaseMethod::PancharatnamDiscrete,
    ))
}

/// Extrapolated sum for states sampled at equal parameter steps; needs an
/// even number of intervals. Falls back to the plain sum if the coarse
/// neighbours are too far apart.
pub fn pancharatnam_extrapolated(states: &[StateVector]) -> Result<PhaseReport> {
    let m = states.len().saturating_sub(1);
    if m < 4 || !m.is_multiple_of(2) {
        return pancharatnam_raw(states);
    }
    let fine = overlap_arg_sum(states, 1)?;
    let coarse = match overlap_arg_sum(states, 2) {
        Ok(c) => c,
        Err(_) => return pancharatnam_raw(states),
    };
    // Each sum is gauge covariant only modulo 2 pi, so the small difference
    // is reduced before it is scaled.
    let diff = C64::from_polar(1.0, fine - coarse).arg();
    Ok(PhaseReport::from_overlap(
        states[0].inner(states.last().unwrap()),
        -(fine + diff / 3.0),
        PhaseMethod::PancharatnamDiscrete,
    ))
}

/// Continuous-form phase of an integrated evolution, with the line integral
/// taken on the dense integration grid.
pub fn evolution_phase(ev: &Evolution) -> PhaseReport {
    PhaseReport::from_overlap(
        ev.path.first().inner(ev.path.last()),
        ev.dynamical_term,
        PhaseMethod::Continuous,
    )
}

/// Prepares `sum_n a_n |e_n(0)>` for each amplitude set in the family's
/// initial basis, integrates them together and returns one report each.
pub fn numeric_geometric_phases(
    family: &dyn HamiltonianFamily,
    t: f64,
    amplitudes: &[ImperfectionSpec],
    settings: &IntegratorSettings,
) -> Result<(Vec<PhaseReport>, Vec<Evolution>)> {
    let basis = family.initial_basis();
    let init = amplitudes
        .iter()
        .map(|a| a.state_in(&basis))
        .collect::<Result<Vec<_>>>()?;
    let (evs, _) = evolve_ensemble(family, t, &init, settings)?;
    Ok((evs.iter().map(evolution_phase).collect(), evs))
}

/// Per-level cumulative energy integrals on a grid; `Delta_mn(s)` follows as
/// differences.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyProfile {
    grid: Vec<f64>,
    /// `energies[k][n]`.
    energies: Vec<Vec<f64>>,
    /// `integrals[n][k] = int_0^{s_k} eps_n`.
    integrals: Vec<Vec<f64>>,
}

impl EnergyProfile {
    /// Trapezoidal integrals of sampled energies.
    pub fn from_samples(grid: Vec<f64>, energies: Vec<Vec<f64>>) -> Result<Self> {
        if grid.len() < 2 || grid.len() != energies.len() {
            return Err(Error::InvalidGrid(format!(
                "need matching grid and energies of length >= 2 (got {} and {})",
                grid.len(),
                energies.len()
            )));
        }
        if grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidGrid(
                "grid must be strictly increasing".into(),
            ));
        }
        let dim = energies[0].len();
        if energies.iter().any(|e| e.len() != dim) {
            return Err(Error::InvalidGrid("ragged energy table".into()));
        }
        let integrals = (0..dim)
            .map(|n| {
                let mut acc = 0.0;
                let mut out = vec![0.0];
                for k in 1..grid.len() {
                    acc += 0.5 * (grid[k] - grid[k - 1]) * (energies[k - 1][n] + energies[k][n]);
                    out.push(acc);
                }
                out
            })
            .collect();
        Ok(Self {
            grid,
            energies,
            integrals,
        })
    }

    pub fn from_frame(frame: &EigenFrame) -> Self {
        let energies = (0..frame.len())
            .map(|k| frame.energies_at(k).to_vec())
            .collect();
        Self::from_samples(frame.grid().to_vec(), energies).expect("frame grids are valid")
    }

    pub fn dim(&self) -> usize {
        self.integrals.len()
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn energy(&self, k: usize, n: usize) -> f64 {
        self.energies[k][n]
    }

    /// `Delta_mn(s_k) = int_0^{s_k} (eps_m - eps_n)`.
    pub fn delta(&self, m: usize, n: usize, k: usize) -> f64 {
        self.integrals[m][k] - self.integrals[n][k]
    }

    /// `Delta_mn(s_k)` for every sample.
    pub fn delta_series(&self, m: usize, n: usize) -> Vec<f64> {
        (0..self.grid.len()).map(|k| self.delta(m, n, k)).collect()
    }

    /// `Delta_mn(1)`.
    pub fn delta_total(&self, m: usize, n: usize) -> f64 {
        self.delta(m, n, self.grid.len() - 1)
    }
}

/// Below this `|a_0|^2` the prediction is outside its regime of validity.
pub const KEY_FORMULA_MIN_GROUND_WEIGHT: f64 = 0.9;

/// `wrap(gamma_0(1) + sum_{n != 0} |a_n|^2 T Delta_n0(1))`.
pub fn key_formula_prediction(
    profile: &EnergyProfile,
    amplitudes: &ImperfectionSpec,
    berry0: f64,
    t: f64,
) -> Result<f64> {
    if amplitudes.dim() != profile.dim() {
        return Err(Error::DimensionMismatch {
            expected: profile.dim(),
            found: amplitudes.dim(),
        });
    }
    if amplitudes.weight(0) < KEY_FORMULA_MIN_GROUND_WEIGHT {
        warn!(
            "ground-state weight {:.3} is far from 1; the imperfection prediction is unreliable",
            amplitudes.weight(0)
        );
    }
    let correction: f64 = (1..amplitudes.dim())
        .map(|n| amplitudes.weight(n) * t * profile.delta_total(n, 0))
        .sum();
    Ok(wrap(berry0 + correction))
}

/// Tolerance used when comparing the exact phase with
/// [`key_formula_prediction`]: `0.05 + 2 sum_{n != 0} |a_0||a_n| max_s
/// |<e_0|d e_n>|`. The second term bounds the first-order cross terms the
/// prediction leaves out.
pub fn key_formula_tolerance(frame: &EigenFrame, amplitudes: &ImperfectionSpec) -> f64 {
    let a0 = amplitudes.a(0).norm();
    0.05 + (1..amplitudes.dim())
        .map(|n| 2.0 * a0 * amplitudes.a(n).norm() * frame.max_derivative_overlap(0, n))
        .sum::<f64>()
}

fn sinc_terms(wbar_t: f64) -> (f64, f64) {
    (1.0 - wbar_t.sin() / wbar_t, (1.0 - wbar_t.cos()) / wbar_t)
}

/// Exact ground-state phase of the spin-half model, decomposed into the
/// `arg` term and the line-integral term.
pub fn exact_gp_perfect_report(params: &SpinHalfParams, t: f64) -> PhaseReport {
    exact_gp_report(params, t, C64::new(1.0, 0.0), C64::new(0.0, 0.0))
}

/// Wrapped exact ground-state phase.
pub fn exact_gp_perfect(params: &SpinHalfParams, t: f64) -> f64 {
    exact_gp_perfect_report(params, t).geometric_phase_wrapped
}

pub fn exact_gp_imperfect_report(
    params: &SpinHalfParams,
    t: f64,
    a0: C64,
    a1: C64,
) -> Result<PhaseReport> {
    check_two_level(a0, a1)?;
    Ok(exact_gp_report(params, t, a0, a1))
}

/// Wrapped exact phase for the initial state `a_0 |e_0(0)> + a_1 |e_1(0)>`.
pub fn exact_gp_imperfect(params: &SpinHalfParams, t: f64, a0: C64, a1: C64) -> Result<f64> {
    Ok(exact_gp_imperfect_report(params, t, a0, a1)?.geometric_phase_wrapped)
}

fn exact_gp_report(params: &SpinHalfParams, t: f64, a0: C64, a1: C64) -> PhaseReport {
    let w0 = params.omega0;
    let w = TAU / t;
    let wbar = params.omega_bar(t);
    let (st, ct) = params.theta.sin_cos();
    let cross = a0.conj() * a1;
    let pop = a0.norm_sqr() - a1.norm_sqr();
    let half = 0.5 * wbar * t;
    let (one_minus_sinc, one_minus_cos) = sinc_terms(wbar * t);

    let overlap = C64::new(
        -half.cos(),
        -(2.0 * cross.re * w * st / wbar + pop * (w0 + w * ct) / wbar) * half.sin(),
    );
    let dynamical =
        -0.5 * w0 * t * pop * (1.0 - (w * w * st * st) / (wbar * wbar) * one_minus_sinc)
            - (TAU * w0 * st / wbar)
                * (cross.re * (w0 + w * ct) / wbar * one_minus_sinc - cross.im * one_minus_cos);
    PhaseReport::from_overlap(overlap, dynamical, PhaseMethod::ExactClosedForm)
}

/// A phase approximation together with its wrap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ApproxPhase {
    pub unwrapped: f64,
    pub wrapped: f64,
}

impl ApproxPhase {
    fn new(unwrapped: f64) -> Self {
        Self {
            unwrapped,
            wrapped: wrap(unwrapped),
        }
    }
}

/// Large-`T` ground-state phase `-pi (1 - cos theta)`.
pub fn approx_gp_perfect(params: &SpinHalfParams) -> ApproxPhase {
    ApproxPhase::new(-PI * (1.0 - params.theta.cos()))
}

/// Large-`T` phase with excited weight `|a_1|^2`:
/// `-pi (1 - cos theta) + |a_1|^2 T w0`.
pub fn approx_gp_imperfect(params: &SpinHalfParams, t: f64, a1_mag2: f64) -> Result<ApproxPhase> {
    if !(0.0..=1.0).contains(&a1_mag2) {
        return Err(Error::InvalidParameter(format!(
            "|a1|^2 must lie in [0, 1], got {a1_mag2}"
        )));
    }
    Ok(ApproxPhase::new(
        approx_gp_perfect(params).unwrapped + a1_mag2 * t * params.omega0,
    ))
}

/// `T -> infinity` limit with `|a_1|^2 = Gamma / T`:
/// `wrap(-pi (1 - cos theta) + Gamma w0)`.
pub fn gamma_limit(params: &SpinHalfParams, gamma: f64) -> Result<f64> {
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "Gamma must be non-negative, got {gamma}"
        )));
    }
    Ok(wrap(
        approx_gp_perfect(params).unwrapped + gamma * params.omega0,
    ))
}

/// Largest phase `T |eps_m - eps_n| h` per frame interval accepted by
/// [`oscillatory_remainder`].
pub const MAX_REMAINDER_PHASE_PER_INTERVAL: f64 = 0.3;

/// `sum_{m != n} a_m^* a_n int_0^1 e^{i T Delta_mn} e^{i(gamma_n - gamma_m)}
/// <e_m|d e_n> ds` by the trapezoidal rule on the frame grid.
pub fn oscillatory_remainder(
    frame: &EigenFrame,
    amplitudes: &ImperfectionSpec,
    t: f64,
) -> Result<C64> {
    let dim = frame.dim();
    if amplitudes.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: amplitudes.dim(),
        });
    }
    let grid = frame.grid();
    for k in 1..frame.len() {
        let spread = frame.energies_at(k)[dim - 1] - frame.energies_at(k)[0];
        let spread = spread.max(frame.energies_at(k - 1)[dim - 1] - frame.energies_at(k - 1)[0]);
        let adv = t.abs() * spread * (grid[k] - grid[k - 1]);
        if adv > MAX_REMAINDER_PHASE_PER_INTERVAL {
            return Err(Error::GridTooCoarse(format!(
                "phase advance {adv:.3} rad per interval near s = {} (limit {MAX_REMAINDER_PHASE_PER_INTERVAL}); \
                 use at least {} samples",
                grid[k],
                (t.abs() * frame.max_spread() / MAX_REMAINDER_PHASE_PER_INTERVAL).ceil() as usize + 1
            )));
        }
    }
    let profile = EnergyProfile::from_frame(frame);
    let mut total = C64::new(0.0, 0.0);
    for m in 0..dim {
        for n in 0..dim {
            if m == n {
                continue;
            }
            let coeff = amplitudes.a(m).conj() * amplitudes.a(n);
            if coeff.norm() == 0.0 {
                continue;
            }
            let gm = frame.berry_accumulator(m)?;
            let gn = frame.berry_accumulator(n)?;
            let integrand: Vec<C64> = (0..frame.len())
                .map(|k| {
                    let ph = t * profile.delta(m, n, k) + gn[k] - gm[k];
                    C64::from_polar(1.0, ph) * frame.derivative_overlap(k, m, n)
                })
                .collect();
            let integral: C64 = (1..frame.len())
                .map(|k| (integrand[k - 1] + integrand[k]) * (0.5 * (grid[k] - grid[k - 1])))
                .sum();
            total += coeff * integral;
        }
    }
    Ok(total)
}

/// `sum_{m != n} |a_m a_n| max_s |<e_m|d e_n>|`, an upper bound on
/// `|oscillatory_remainder|` for every `T`.
pub fn remainder_bound(frame: &EigenFrame, amplitudes: &ImperfectionSpec) -> f64 {
    let dim = frame.dim();
    let mut acc = 0.0;
    for m in 0..dim {
        for n in 0..dim {
            if m != n {
                acc += amplitudes.a(m).norm()
                    * amplitudes.a(n).norm()
                    * frame.max_derivative_overlap(m, n);
            }
        }
    }
    acc
}
