//! Acceptance criteria, one line each. Exits non-zero if any criterion fails.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::process::ExitCode;
use std::time::Instant;

use geophase::bloch::{gp_from_solid_angle, latitude_circle, solid_angle, BlochPath, Closure};
use geophase::hamiltonian::{
    smooth_eigenframe, uniform_grid, HamiltonianFamily, RandomAnalyticFamily, SpinHalfFamily,
    SpinHalfParams,
};
use geophase::phase::{
    approx_gp_perfect, exact_gp_imperfect, exact_gp_perfect, key_formula_prediction,
    key_formula_tolerance, numeric_geometric_phases, pancharatnam_extrapolated, pancharatnam_raw,
    phase_distance, wrap, EnergyProfile,
};
use geophase::propagator::{
    evolve_ensemble, evolve_interval_raw, exact_imperfect_state, exact_perfect_state,
    exact_spin_half_path, exact_spin_half_propagator, spin_half_initial_basis, ImperfectionSpec,
    IntegratorSettings,
};
use geophase::{StateVector, C64};
use geophase_experiments::config::{Experiment, ExperimentConfig, Spacing, SweepSpec};
use geophase_experiments::fig3::run_fig3;
use geophase_experiments::sweep::{remainder_magnitude, run_fig1, run_fig2};
use geophase_experiments::verify::spread_imperfection;
use geophase_verification::{circular_max_gap, spread, Outcome, Report};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Res<T> = Result<T, Box<dyn std::error::Error>>;
type Criterion = fn() -> Res<Vec<Outcome>>;

const OMEGA0: f64 = 5000.0;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn fig_params() -> SpinHalfParams {
    SpinHalfParams::new(FRAC_PI_2, OMEGA0).unwrap()
}

fn fig_amps() -> (C64, C64) {
    (
        c((399.0f64 / 400.0).sqrt(), 0.0),
        c((1.0f64 / 400.0).sqrt(), 0.0),
    )
}

fn propagator_exactness() -> Res<Vec<Outcome>> {
    let p = fig_params();
    let t = 0.04;
    let (a0, a1) = fig_amps();
    let basis = spin_half_initial_basis(&p);
    let init = [
        ImperfectionSpec::perfect(2).state_in(&basis)?,
        ImperfectionSpec::two_level(a0, a1)?.state_in(&basis)?,
    ];
    let (evs, _) = evolve_ensemble(
        &SpinHalfFamily::new(p),
        t,
        &init,
        &IntegratorSettings::default(),
    )?;
    let perfect = exact_spin_half_path(&p, t, c(1.0, 0.0), c(0.0, 0.0), 2001)?;
    let imperfect = exact_spin_half_path(&p, t, a0, a1, 2001)?;
    Ok(vec![
        Outcome::at_most(
            "1a",
            "integrated perfect state vs closed form",
            evs[0].path.max_distance(&perfect)?,
            1e-8,
        ),
        Outcome::at_most(
            "1b",
            "integrated imperfect state vs closed form",
            evs[1].path.max_distance(&imperfect)?,
            1e-8,
        ),
    ])
}

fn closed_form_agreement() -> Res<Vec<Outcome>> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut worst_p, mut worst_i) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let theta = rng.gen_range(0.1..PI - 0.1);
        let w0 = rng.gen_range(1000.0..10000.0);
        let t = rng.gen_range(0.01..1.0);
        let (x, y, phi): (f64, f64, f64) = (rng.gen(), rng.gen(), rng.gen_range(0.0..TAU));
        let norm = (x * x + y * y).sqrt();
        let (a0, a1) = (c(x / norm, 0.0), C64::from_polar(y / norm, phi));
        let p = SpinHalfParams::new(theta, w0)?;
        let specs = [
            ImperfectionSpec::perfect(2),
            ImperfectionSpec::two_level(a0, a1)?,
        ];
        let (reports, _) = numeric_geometric_phases(
            &SpinHalfFamily::new(p),
            t,
            &specs,
            &IntegratorSettings::default(),
        )?;
        worst_p = worst_p.max(phase_distance(
            reports[0].geometric_phase_wrapped,
            exact_gp_perfect(&p, t),
        ));
        worst_i = worst_i.max(phase_distance(
            reports[1].geometric_phase_wrapped,
            exact_gp_imperfect(&p, t, a0, a1)?,
        ));
    }
    Ok(vec![
        Outcome::at_most(
            "2a",
            "numeric vs exact perfect phase, 100 cases",
            worst_p,
            1e-6,
        ),
        Outcome::at_most(
            "2b",
            "numeric vs exact imperfect phase, 100 cases",
            worst_i,
            1e-6,
        ),
    ])
}

fn fig1_dichotomy() -> Res<Vec<Outcome>> {
    let dir = tempfile::tempdir()?;
    let mut cfg = ExperimentConfig::defaults(Experiment::Fig1);
    cfg.numeric_stride = 0;
    cfg.output = dir.path().join("fig1");
    let res = run_fig1(&cfg)?;
    let late: Vec<_> = res
        .rows
        .iter()
        .filter(|r| OMEGA0 * r.t >= 2000.0 - 1e-9)
        .collect();
    let off_pi = late
        .iter()
        .map(|r| phase_distance(r.gp_perfect_exact, PI))
        .fold(0.0, f64::max);
    let imperfect: Vec<f64> = res.rows.iter().map(|r| r.gp_imperfect_exact).collect();
    Ok(vec![
        Outcome::at_most(
            "3a",
            format!("perfect phase within reach of pi over {} rows", late.len()),
            off_pi,
            0.05,
        ),
        Outcome::at_most(
            "3b",
            "largest gap between attained imperfect phases",
            circular_max_gap(&imperfect),
            0.5,
        ),
        Outcome::at_most(
            "3c",
            "range of the perfect column",
            spread(late.iter().map(|r| r.gp_perfect_exact)),
            0.1,
        ),
        Outcome::new(
            "3d",
            "range of the imperfect column",
            spread(late.iter().map(|r| r.gp_imperfect_exact)) >= 5.0,
            format!(
                "{:.3e} >= 5.000e0",
                spread(late.iter().map(|r| r.gp_imperfect_exact))
            ),
        ),
    ])
}

fn pointwise_closeness() -> Res<Vec<Outcome>> {
    let p = fig_params();
    let (a0, a1) = fig_amps();
    let specs = [
        ImperfectionSpec::perfect(2),
        ImperfectionSpec::two_level(a0, a1)?,
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let t = rng.gen_range(0.01..1.0);
        let (_, evs) = numeric_geometric_phases(
            &SpinHalfFamily::new(p),
            t,
            &specs,
            &IntegratorSettings::default(),
        )?;
        for (x, y) in evs[0].path.states.iter().zip(&evs[1].path.states) {
            worst = worst.max((x.inner(y).norm() - a0.re).abs());
        }
    }
    Ok(vec![Outcome::at_most(
        "4",
        "overlap modulus vs sqrt(399/400) along 10 paths",
        worst,
        1e-9,
    )])
}

fn key_formula() -> Res<Vec<Outcome>> {
    let p = fig_params();
    let (a0, a1) = fig_amps();
    let t = 1e4 / OMEGA0;
    let exact = exact_gp_imperfect(&p, t, a0, a1)?;
    let predicted = wrap(approx_gp_perfect(&p).unwrapped + a1.norm_sqr() * t * OMEGA0);
    let mut out = vec![Outcome::at_most(
        "5a",
        "spin-half key formula at w0 T = 1e4",
        phase_distance(exact, predicted),
        0.15,
    )];

    let family = RandomAnalyticFamily::three_level(0);
    let frame = smooth_eigenframe(&family, 2001)?;
    let amps = spread_imperfection(3, a0, a1)?;
    let profile = EnergyProfile::from_frame(&frame);
    let berry0 = frame.berry_phase(0)?;
    let tol = key_formula_tolerance(&frame, &amps);
    let mut worst = 0.0f64;
    for t in [100.0, 200.0, 400.0, 800.0] {
        let (reports, _) = numeric_geometric_phases(
            &family,
            t,
            std::slice::from_ref(&amps),
            &IntegratorSettings::default(),
        )?;
        let predicted = key_formula_prediction(&profile, &amps, berry0, t)?;
        worst = worst.max(phase_distance(
            reports[0].geometric_phase_wrapped,
            predicted,
        ));
    }
    out.push(Outcome::at_most(
        "5b",
        "three-level key formula, T in {100, 200, 400, 800}",
        worst,
        tol,
    ));
    Ok(out)
}

fn gamma_limits() -> Res<Vec<Outcome>> {
    let dir = tempfile::tempdir()?;
    let mut cfg = ExperimentConfig::defaults(Experiment::Fig2);
    cfg.numeric_stride = 0;
    cfg.output = dir.path().join("fig2");
    let res = run_fig2(&cfg)?;
    let mut out = Vec::new();
    for (k, s) in res.summaries.iter().enumerate() {
        let id = format!("6{}", (b'a' + k as u8) as char);
        let expected = wrap(-PI + s.gamma_omega0);
        let gap = phase_distance(s.gp_at_t_max, expected);
        let pass = gap <= 0.1 && s.adiabatic_fidelity > 1.0 - 1e-3;
        out.push(Outcome::new(
            id,
            format!("Gamma w0 = {:.4}, T = {}", s.gamma_omega0, s.t_max),
            pass,
            format!(
                "phase gap {gap:.3e} <= 1.000e-1, path fidelity {:.9} > 0.999",
                s.adiabatic_fidelity
            ),
        ));
    }
    let mut limits: Vec<f64> = res.summaries.iter().map(|s| s.gp_at_t_max).collect();
    limits.sort_by(f64::total_cmp);
    let closest = limits
        .windows(2)
        .map(|w| phase_distance(w[0], w[1]))
        .fold(f64::INFINITY, f64::min);
    out.push(Outcome::new(
        "6d",
        "limits are distinct",
        closest > 0.2,
        format!("closest pair {closest:.3e} > 2.000e-1"),
    ));
    Ok(out)
}

fn solid_angle_laws() -> Res<Vec<Outcome>> {
    let mut worst = 0.0f64;
    for k in 0..20 {
        let theta = 0.05 + (PI - 0.1) * k as f64 / 19.0;
        let omega = solid_angle(&latitude_circle(theta, 20_000, 1)?, Closure::AlreadyClosed)?;
        worst = worst.max((omega - TAU * (1.0 - theta.cos())).abs());
    }
    let mut out = vec![Outcome::at_most(
        "7a",
        "latitude circles, 20 colatitudes",
        worst,
        1e-6,
    )];

    let p = fig_params();
    let mut worst = 0.0f64;
    for t in [0.4, 1.0, 2.0, 4.0] {
        // about 64 samples per precession loop
        let n = ((OMEGA0 * t / TAU) * 64.0).ceil() as usize + 1;
        let path = exact_spin_half_path(&p, t, c(1.0, 0.0), c(0.0, 0.0), n.max(4001))?;
        let omega = solid_angle(&BlochPath::from_sampled(&path)?, Closure::GeodesicClose)?;
        worst = worst.max(phase_distance(
            gp_from_solid_angle(omega),
            exact_gp_perfect(&p, t),
        ));
    }
    out.push(Outcome::at_most(
        "7b",
        "perfect path angle vs phase, w0 T in [2000, 20000]",
        worst,
        0.05,
    ));

    let dir = tempfile::tempdir()?;
    let mut cfg = ExperimentConfig::defaults(Experiment::Fig3);
    cfg.output = dir.path().join("fig3");
    let res = run_fig3(&cfg)?;
    let imperfect = res
        .summaries
        .iter()
        .find(|s| s.path == "imperfect")
        .expect("fig3 reports the imperfect path");
    out.push(Outcome::at_most(
        "7c",
        "corrected angle vs imperfect phase at T = 0.04",
        phase_distance(imperfect.gp_corrected, imperfect.gp_exact),
        0.15,
    ));
    Ok(out)
}

fn remainder_decay() -> Res<Vec<Outcome>> {
    let (a0, a1) = fig_amps();
    let window = |family: &dyn HamiltonianFamily, amps: &ImperfectionSpec, t0: f64| -> Res<f64> {
        let mut acc = 0.0;
        for j in 0..8 {
            acc += remainder_magnitude(family, amps, t0 * (1.0 + j as f64 / 32.0))?.norm();
        }
        Ok(acc / 8.0)
    };
    let (mut short, mut long) = (0.0, 0.0);
    let mut ratios = Vec::new();
    for seed in 0..5 {
        let family = RandomAnalyticFamily::three_level(seed);
        let unit = TAU / smooth_eigenframe(&family, 2001)?.min_gap();
        let amps = spread_imperfection(3, a0, a1)?;
        let s = window(&family, &amps, 16.0 * unit)?;
        let l = window(&family, &amps, 32.0 * 16.0 * unit)?;
        ratios.push(format!("{:.1}", s / l));
        short += s / 5.0;
        long += l / 5.0;
    }
    let ratio = short / long;
    Ok(vec![Outcome::new(
        "8",
        "remainder decay from T to 32 T, 5 seeded families",
        ratio >= 3.0,
        format!("{ratio:.3e} >= 3.000e0 (per family {})", ratios.join(", ")),
    )])
}

fn property_suites() -> Res<Vec<Outcome>> {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let p = fig_params();
    let (a0, a1) = fig_amps();

    let mut gauge = 0.0f64;
    for _ in 0..32 {
        let t = rng.gen_range(0.01..0.08);
        let path = exact_spin_half_path(&p, t, a0, a1, 401)?;
        let mut chi: Vec<f64> = (0..401).map(|_| rng.gen_range(-PI..PI)).collect();
        chi[400] = chi[0];
        let states: Vec<StateVector> = path
            .states
            .iter()
            .zip(&chi)
            .map(|(s, &x)| s.scaled(C64::from_polar(1.0, x)))
            .collect();
        for f in [pancharatnam_raw, pancharatnam_extrapolated] {
            let a = f(&path.states)?.geometric_phase_wrapped;
            let b = f(&states)?.geometric_phase_wrapped;
            gauge = gauge.max(phase_distance(a, b));
        }
    }

    let mut reparam = 0.0f64;
    let grid = uniform_grid(2001);
    for _ in 0..8 {
        let amp = rng.gen_range(0.0..0.8);
        let k = rng.gen_range(1..3) as f64;
        let q = SpinHalfParams::new(rng.gen_range(0.3..2.8), 4000.0)?;
        let warp = |s: f64| s - amp * (TAU * k * s).sin() / (TAU * k);
        let straight: Vec<StateVector> = grid
            .iter()
            .map(|&s| exact_imperfect_state(&q, 0.03, a0, a1, s))
            .collect::<Result<_, _>>()?;
        let warped: Vec<StateVector> = grid
            .iter()
            .map(|&s| exact_imperfect_state(&q, 0.03, a0, a1, warp(s)))
            .collect::<Result<_, _>>()?;
        reparam = reparam.max(phase_distance(
            pancharatnam_extrapolated(&straight)?.geometric_phase_wrapped,
            pancharatnam_extrapolated(&warped)?.geometric_phase_wrapped,
        ));
    }

    let mut unitarity = 0.0f64;
    for _ in 0..1000 {
        let q = SpinHalfParams::new(rng.gen_range(0.0..PI), rng.gen_range(1.0..1e4))?;
        let u = exact_spin_half_propagator(&q, rng.gen_range(1e-3..2.0), rng.gen_range(0.0..1.0))?;
        let g = u.adjoint() * &u;
        for i in 0..2 {
            for j in 0..2 {
                let id = if i == j { 1.0 } else { 0.0 };
                unitarity = unitarity.max((g[(i, j)] - c(id, 0.0)).norm());
            }
        }
    }

    let q = SpinHalfParams::new(1.0, 2500.0)?;
    let fam = SpinHalfFamily::new(q);
    let t = 0.4;
    let psi0 = exact_perfect_state(&q, t, 0.0)?;
    let target = exact_perfect_state(&q, t, 1.0)?;
    let mut errors = Vec::new();
    for steps in [10_000usize, 20_000, 40_000, 80_000, 160_000] {
        let settings = IntegratorSettings {
            steps: Some(steps),
            output_points: 2,
            ..Default::default()
        };
        let raw = evolve_interval_raw(&fam, t, std::slice::from_ref(&psi0), 0.0, 1.0, &settings)?;
        errors.push(raw.states[0].last().expect("two samples").distance(&target));
    }
    let ratios: Vec<f64> = errors.windows(2).map(|w| w[0] / w[1]).collect();
    let order_ok = ratios.iter().all(|r| (13.0..19.0).contains(r));

    let dir = tempfile::tempdir()?;
    let mut csvs = Vec::new();
    for (name, jobs) in [("a", 1), ("b", 2), ("c", 1)] {
        let mut cfg = ExperimentConfig::defaults(Experiment::Fig1);
        cfg.sweep = SweepSpec {
            min: 0.01,
            max: 0.1,
            count: 6,
            spacing: Spacing::Log,
        };
        cfg.numeric_stride = 2;
        cfg.jobs = Some(jobs);
        cfg.output = dir.path().join(name);
        csvs.push(std::fs::read(run_fig1(&cfg)?.csv)?);
    }
    let deterministic = csvs.windows(2).all(|w| w[0] == w[1]);

    Ok(vec![
        Outcome::at_most(
            "9a",
            "Pancharatnam gauge invariance, 32 paths",
            gauge,
            1e-12,
        ),
        Outcome::at_most(
            "9b",
            "Pancharatnam reparameterization invariance, 8 warps",
            reparam,
            1e-6,
        ),
        Outcome::at_most("9c", "propagator unitarity, 1000 draws", unitarity, 1e-12),
        Outcome::new(
            "9d",
            "fourth-order step convergence",
            order_ok,
            format!(
                "halving ratios {} in [13, 19)",
                ratios
                    .iter()
                    .map(|r| format!("{r:.2}"))
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
        ),
        Outcome::new(
            "9e",
            "sweep determinism across worker counts",
            deterministic,
            if deterministic {
                "byte-identical"
            } else {
                "outputs differ"
            },
        ),
    ])
}

fn main() -> ExitCode {
    let criteria: [(&str, &str, Criterion); 9] = [
        ("1", "propagator exactness", propagator_exactness),
        ("2", "closed-form agreement", closed_form_agreement),
        ("3", "fixed-imperfection dichotomy", fig1_dichotomy),
        ("4", "pointwise closeness", pointwise_closeness),
        ("5", "key formula", key_formula),
        ("6", "Gamma limits", gamma_limits),
        ("7", "solid-angle laws", solid_angle_laws),
        ("8", "remainder decay", remainder_decay),
        ("9", "property suites", property_suites),
    ];
    let mut report = Report::default();
    for (id, title, run) in criteria {
        let start = Instant::now();
        match run() {
            Ok(outcomes) => outcomes.into_iter().for_each(|o| report.record(o)),
            Err(e) => report.record(Outcome::errored(id, title, e)),
        }
        eprintln!(
            "  criterion {id} took {:.1} s",
            start.elapsed().as_secs_f64()
        );
    }
    let failed = report.failures();
    println!(
        "acceptance: {} of {} checks passed",
        report.outcomes.len() - failed.len(),
        report.outcomes.len()
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!(
            "failing: {}",
            failed
                .iter()
                .map(|o| o.id.as_str())
                .collect::<Vec<_>>()
                .join(", ")
        );
        ExitCode::FAILURE
    }
}
