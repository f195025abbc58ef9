//! T-sweeps for the spin-half model: fixed imperfections and Gamma-scaled
//! ones.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use geophase::hamiltonian::spin_half_eigensystem;
use geophase::hamiltonian::{
    smooth_eigenframe, EigenFrame, HamiltonianFamily, SpinHalfFamily, SpinHalfParams,
};
use geophase::phase::{
    approx_gp_imperfect, approx_gp_perfect, exact_gp_imperfect, exact_gp_perfect, gamma_limit,
    key_formula_prediction, numeric_geometric_phases, oscillatory_remainder, phase_distance,
    EnergyProfile, MAX_REMAINDER_PHASE_PER_INTERVAL,
};
use geophase::propagator::{
    exact_imperfect_state, GammaScaling, ImperfectionSpec, IntegratorSettings,
};
use geophase::C64;
use log::{info, warn};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::{ExperimentError, Result};

/// Largest wrapped gap between numeric and closed-form phases accepted by a
/// sweep.
pub const NUMERIC_ORACLE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    #[serde(rename = "T")]
    pub t: f64,
    pub gp_perfect_exact: f64,
    pub gp_imperfect_exact: f64,
    /// `None` on rows skipped by the numeric stride.
    pub gp_perfect_numeric: Option<f64>,
    pub gp_imperfect_numeric: Option<f64>,
    pub gp_key_formula: f64,
    pub gp_approx22: f64,
    pub gp_approx23: f64,
    pub fidelity: f64,
    pub remainder_mag: f64,
}

pub const SWEEP_COLUMNS: [&str; 10] = [
    "T",
    "gp_perfect_exact",
    "gp_imperfect_exact",
    "gp_perfect_numeric",
    "gp_imperfect_numeric",
    "gp_key_formula",
    "gp_approx22",
    "gp_approx23",
    "fidelity",
    "remainder_mag",
];

/// 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

impl SweepRow {
    pub fn record(&self) -> Vec<String> {
        let opt = |x: Option<f64>| x.map(fmt_f64).unwrap_or_default();
        vec![
            fmt_f64(self.t),
            fmt_f64(self.gp_perfect_exact),
            fmt_f64(self.gp_imperfect_exact),
            opt(self.gp_perfect_numeric),
            opt(self.gp_imperfect_numeric),
            fmt_f64(self.gp_key_formula),
            fmt_f64(self.gp_approx22),
            fmt_f64(self.gp_approx23),
            fmt_f64(self.fidelity),
            fmt_f64(self.remainder_mag),
        ]
    }

    /// Largest wrapped numeric-vs-exact gap on this row.
    pub fn numeric_gap(&self) -> Option<f64> {
        let p = self
            .gp_perfect_numeric
            .map(|x| phase_distance(x, self.gp_perfect_exact));
        let q = self
            .gp_imperfect_numeric
            .map(|x| phase_distance(x, self.gp_imperfect_exact));
        match (p, q) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        }
    }
}

/// Writes rows in order. On the first `Err` the rows before it are flushed
/// and the error returned.
pub fn write_rows(path: &Path, rows: Vec<Result<SweepRow>>) -> Result<Vec<SweepRow>> {
    let mut w = csv::Writer::from_writer(BufWriter::new(File::create(path)?));
    w.write_record(SWEEP_COLUMNS)?;
    let mut done = Vec::with_capacity(rows.len());
    for row in rows {
        match row {
            Ok(r) => {
                w.write_record(r.record())?;
                done.push(r);
            }
            Err(e) => {
                w.flush()?;
                warn!(
                    "sweep aborted after {} rows; partial output in {}",
                    done.len(),
                    path.display()
                );
                return Err(e);
            }
        }
    }
    w.flush()?;
    Ok(done)
}

/// Frame data shared by every row of a sweep.
pub struct SweepContext {
    pub params: SpinHalfParams,
    pub family: SpinHalfFamily,
    pub profile: EnergyProfile,
    pub berry0: f64,
    pub settings: IntegratorSettings,
}

impl SweepContext {
    pub fn new(params: SpinHalfParams, grid_size: usize) -> Result<Self> {
        let family = SpinHalfFamily::new(params);
        let frame = smooth_eigenframe(&family, grid_size)?;
        Ok(Self {
            params,
            profile: EnergyProfile::from_frame(&frame),
            berry0: frame.berry_phase(0)?,
            family,
            settings: IntegratorSettings::with_output_points(grid_size),
        })
    }

    pub fn row(&self, t: f64, a0: C64, a1: C64, numeric: bool) -> Result<SweepRow> {
        let p = &self.params;
        let amps = ImperfectionSpec::two_level(a0, a1)?;
        let (gp_perfect_numeric, gp_imperfect_numeric) = if numeric {
            let (reports, _) = numeric_geometric_phases(
                &self.family,
                t,
                &[ImperfectionSpec::perfect(2), amps.clone()],
                &self.settings,
            )?;
            (
                Some(reports[0].geometric_phase_wrapped),
                Some(reports[1].geometric_phase_wrapped),
            )
        } else {
            (None, None)
        };
        Ok(SweepRow {
            t,
            gp_perfect_exact: exact_gp_perfect(p, t),
            gp_imperfect_exact: exact_gp_imperfect(p, t, a0, a1)?,
            gp_perfect_numeric,
            gp_imperfect_numeric,
            gp_key_formula: key_formula_prediction(&self.profile, &amps, self.berry0, t)?,
            gp_approx22: approx_gp_perfect(p).wrapped,
            gp_approx23: approx_gp_imperfect(p, t, a1.norm_sqr())?.wrapped,
            fidelity: a0.norm(),
            remainder_mag: remainder_magnitude(&self.family, &amps, t)?.norm(),
        })
    }
}

/// Oscillatory remainder on a frame fine enough for `t`.
pub fn remainder_magnitude(
    family: &dyn HamiltonianFamily,
    amplitudes: &ImperfectionSpec,
    t: f64,
) -> Result<C64> {
    let frame = remainder_frame(family, t)?;
    Ok(oscillatory_remainder(&frame, amplitudes, t)?)
}

pub fn remainder_frame(family: &dyn HamiltonianFamily, t: f64) -> Result<EigenFrame> {
    let probe = smooth_eigenframe(family, 257)?;
    // 20% headroom under the per-interval limit for the spread between probes
    let intervals =
        (t * probe.max_spread() * 1.2 / MAX_REMAINDER_PHASE_PER_INTERVAL).ceil() as usize;
    let intervals = intervals.max(256).next_multiple_of(2);
    Ok(smooth_eigenframe(family, intervals + 1)?)
}

fn numeric_mask(count: usize, stride: usize) -> Vec<bool> {
    (0..count)
        .map(|k| stride > 0 && (k % stride == 0 || k + 1 == count))
        .collect()
}

pub(crate) fn thread_pool(jobs: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        b = b.num_threads(j);
    }
    b.build()
        .map_err(|e| ExperimentError::Config(format!("cannot start worker pool: {e}")))
}

/// Rows for `ts` with amplitudes depending on `T`, computed in parallel and
/// returned in the order of `ts`.
fn sweep_rows(
    ctx: &SweepContext,
    ts: &[f64],
    amps: impl Fn(f64) -> Result<(C64, C64)> + Sync,
    stride: usize,
    jobs: Option<usize>,
) -> Result<Vec<Result<SweepRow>>> {
    let mask = numeric_mask(ts.len(), stride);
    let pool = thread_pool(jobs)?;
    Ok(pool.install(|| {
        ts.par_iter()
            .zip(mask.par_iter())
            .map(|(&t, &numeric)| {
                let (a0, a1) = amps(t)?;
                ctx.row(t, a0, a1, numeric)
            })
            .collect()
    }))
}

fn check_numeric(rows: &[SweepRow], label: &str) -> Result<f64> {
    let worst = rows
        .iter()
        .filter_map(SweepRow::numeric_gap)
        .fold(0.0f64, f64::max);
    if worst > NUMERIC_ORACLE_TOL {
        return Err(ExperimentError::Battery(format!(
            "{label}: numeric and closed-form phases differ by {worst:.3e} rad (limit {NUMERIC_ORACLE_TOL:e})"
        )));
    }
    Ok(worst)
}

#[derive(Debug, Clone)]
pub struct Fig1Output {
    pub rows: Vec<SweepRow>,
    pub csv: PathBuf,
    pub max_numeric_gap: f64,
}

/// Fixed-amplitude sweep. The numeric columns are checked against the
/// closed forms after the CSV is written.
pub fn run_fig1(cfg: &ExperimentConfig) -> Result<Fig1Output> {
    cfg.validate()?;
    let params = cfg.model.spin_half_params()?;
    let (a0, a1) = cfg.amplitudes.fixed_pair()?;
    let ts = cfg.sweep.grid()?;
    let ctx = SweepContext::new(params, cfg.grid_size)?;
    info!(
        "fig1: {} values of T in [{}, {}]",
        ts.len(),
        ts[0],
        ts[ts.len() - 1]
    );
    let rows = sweep_rows(&ctx, &ts, |_| Ok((a0, a1)), cfg.numeric_stride, cfg.jobs)?;
    let csv = cfg.output_path(".csv");
    let rows = write_rows(&csv, rows)?;
    let max_numeric_gap = check_numeric(&rows, "fig1")?;
    Ok(Fig1Output {
        rows,
        csv,
        max_numeric_gap,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GammaSummary {
    pub gamma: f64,
    pub gamma_omega0: f64,
    /// `wrap(-pi (1 - cos theta) + Gamma w0)`.
    pub limit: f64,
    pub t_max: f64,
    pub gp_at_t_max: f64,
    pub gap_to_limit: f64,
    /// `min_s |<e_0(s)|psi'(s)>|^2` at the largest T.
    pub adiabatic_fidelity: f64,
}

#[derive(Debug, Clone)]
pub struct Fig2Output {
    pub tables: Vec<(f64, Vec<SweepRow>)>,
    pub summaries: Vec<GammaSummary>,
    pub csvs: Vec<PathBuf>,
    pub summary_csv: PathBuf,
    pub max_numeric_gap: f64,
}

/// Smallest `|<e_0(s)|psi(s)>|^2` along the closed-form path, on `samples`
/// points.
pub fn adiabatic_fidelity(
    params: &SpinHalfParams,
    t: f64,
    a0: C64,
    a1: C64,
    samples: usize,
) -> Result<f64> {
    let mut worst = 1.0f64;
    for k in 0..samples {
        let s = k as f64 / (samples - 1) as f64;
        let psi = exact_imperfect_state(params, t, a0, a1, s)?;
        let e0 = &spin_half_eigensystem(params, s).vectors[0];
        worst = worst.min(e0.inner(&psi).norm_sqr());
    }
    Ok(worst)
}

pub fn run_fig2(cfg: &ExperimentConfig) -> Result<Fig2Output> {
    cfg.validate()?;
    let params = cfg.model.spin_half_params()?;
    let gammas = cfg.amplitudes.gammas(params.omega0)?;
    let ts = cfg.sweep.grid()?;
    let (t_min, t_max) = (ts[0], ts[ts.len() - 1]);
    for &g in &gammas {
        if !(g.is_finite() && g >= 0.0) || g > t_min {
            return Err(ExperimentError::InvalidGamma { gamma: g, t_min });
        }
    }
    let ctx = SweepContext::new(params, cfg.grid_size)?;
    let mut out = Fig2Output {
        tables: Vec::new(),
        summaries: Vec::new(),
        csvs: Vec::new(),
        summary_csv: cfg.output_path("_limits.csv"),
        max_numeric_gap: 0.0,
    };
    for (i, &gamma) in gammas.iter().enumerate() {
        info!(
            "fig2: Gamma = {gamma} us (Gamma w0 = {})",
            gamma * params.omega0
        );
        let amps = |t: f64| {
            let spec = GammaScaling::new(gamma, t)?.amplitudes();
            Ok((spec.a(0), spec.a(1)))
        };
        let rows = sweep_rows(&ctx, &ts, amps, cfg.numeric_stride, cfg.jobs)?;
        let csv = cfg.output_path(&format!("_gamma{i}.csv"));
        let rows = write_rows(&csv, rows)?;
        out.max_numeric_gap = out.max_numeric_gap.max(check_numeric(&rows, "fig2")?);
        let last = rows.last().expect("count >= 2");
        let limit = gamma_limit(&params, gamma)?;
        let (a0, a1) = amps(t_max)?;
        out.summaries.push(GammaSummary {
            gamma,
            gamma_omega0: gamma * params.omega0,
            limit,
            t_max,
            gp_at_t_max: last.gp_imperfect_exact,
            gap_to_limit: phase_distance(last.gp_imperfect_exact, limit),
            adiabatic_fidelity: adiabatic_fidelity(&params, t_max, a0, a1, cfg.grid_size)?,
        });
        out.csvs.push(csv);
        out.tables.push((gamma, rows));
    }
    write_summaries(&out.summary_csv, &out.summaries)?;
    Ok(out)
}

fn write_summaries(path: &Path, rows: &[GammaSummary]) -> Result<()> {
    let mut w = csv::Writer::from_writer(BufWriter::new(File::create(path)?));
    w.write_record([
        "gamma",
        "gamma_omega0",
        "limit",
        "t_max",
        "gp_at_t_max",
        "gap_to_limit",
        "adiabatic_fidelity",
    ])?;
    for r in rows {
        w.write_record([
            fmt_f64(r.gamma),
            fmt_f64(r.gamma_omega0),
            fmt_f64(r.limit),
            fmt_f64(r.t_max),
            fmt_f64(r.gp_at_t_max),
            fmt_f64(r.gap_to_limit),
            fmt_f64(r.adiabatic_fidelity),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Plain-text summary line for a CSV artifact.
pub fn announce(out: &mut impl Write, what: &str, path: &Path) -> std::io::Result<()> {
    writeln!(out, "{what}: {}", path.display())
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    fn ctx() -> SweepContext {
        SweepContext::new(SpinHalfParams::new(PI / 2.0, 5000.0).unwrap(), 2001).unwrap()
    }

    #[test]
    fn perfect_amplitudes_make_columns_coincide() {
        let r = ctx()
            .row(0.7, C64::new(1.0, 0.0), C64::new(0.0, 0.0), false)
            .unwrap();
        assert!((r.gp_perfect_exact - r.gp_imperfect_exact).abs() <= 1e-12);
        assert_eq!(r.remainder_mag, 0.0);
        assert_eq!(r.fidelity, 1.0);
    }

    #[test]
    fn key_formula_column_is_recomputable() {
        let a1 = (1.0f64 / 400.0).sqrt();
        let r = ctx()
            .row(
                1.3,
                C64::new((1.0 - a1 * a1).sqrt(), 0.0),
                C64::new(a1, 0.0),
                false,
            )
            .unwrap();
        // Berry phase -pi(1 - cos theta) and Delta_10 = w0.
        let want = geophase::phase::wrap(-PI + a1 * a1 * 1.3 * 5000.0);
        assert!(phase_distance(r.gp_key_formula, want) < 1e-9);
        for x in [
            r.gp_perfect_exact,
            r.gp_imperfect_exact,
            r.gp_key_formula,
            r.gp_approx22,
            r.gp_approx23,
        ] {
            assert!((0.0..std::f64::consts::TAU).contains(&x));
        }
    }

    #[test]
    fn numeric_columns_match_closed_forms() {
        let a1 = (1.0f64 / 400.0).sqrt();
        let r = ctx()
            .row(
                0.05,
                C64::new((1.0 - a1 * a1).sqrt(), 0.0),
                C64::new(a1, 0.0),
                true,
            )
            .unwrap();
        assert!(r.numeric_gap().unwrap() <= NUMERIC_ORACLE_TOL);
    }

    #[test]
    fn stride_always_includes_last_row() {
        assert_eq!(numeric_mask(5, 2), vec![true, false, true, false, true]);
        assert_eq!(numeric_mask(3, 0), vec![false; 3]);
    }

    #[test]
    fn records_use_17_significant_digits() {
        assert_eq!(fmt_f64(PI), "3.1415926535897931e0");
        assert_eq!(fmt_f64(0.1).parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn aborted_sweep_keeps_finished_rows() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.csv");
        let c = ctx();
        let good = c.row(0.5, C64::new(1.0, 0.0), C64::new(0.0, 0.0), false);
        let rows = vec![good, Err(ExperimentError::Battery("stop".into()))];
        assert!(write_rows(&path, rows).is_err());
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert!(text.starts_with("T,gp_perfect_exact,"));
    }
}
