use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use geophase_experiments::config::{Experiment, ExperimentConfig, ModelSpec};
use geophase_experiments::error::{ExperimentError, Result};
use geophase_experiments::{fig3, plot, sweep, validate, verify};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "geophase",
    version,
    about = "Geometric-phase sweeps and checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fixed-imperfection sweep over T.
    Fig1(Common),
    /// Sweeps with excited weight Gamma / T for several Gamma.
    Fig2(Common),
    /// Perfect and imperfect paths on the Bloch sphere.
    Fig3(Common),
    /// Property battery on the configured family.
    Verify(Common),
    /// Hermiticity, cyclicity and gap checks only.
    ValidateFamily(Common),
}

#[derive(Args)]
struct Common {
    /// JSON config; its keys replace the built-in defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output path prefix.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    grid_size: Option<usize>,
    /// Worker threads for sweeps.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Also write SVG renderings.
    #[arg(long)]
    plot: bool,
    /// Use the matrices tabulated in this file as the model.
    #[arg(long)]
    family: Option<PathBuf>,
    /// Numeric pipeline on every k-th sweep row (0 = never).
    #[arg(long)]
    numeric_stride: Option<usize>,
}

impl Common {
    fn resolve(&self, kind: Experiment) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(p) => ExperimentConfig::load(kind, p)?,
            None => ExperimentConfig::defaults(kind),
        };
        if let Some(o) = &self.out {
            cfg.output = o.clone();
        }
        if let Some(g) = self.grid_size {
            cfg.grid_size = g;
        }
        if let Some(j) = self.jobs {
            cfg.jobs = Some(j);
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(k) = self.numeric_stride {
            cfg.numeric_stride = k;
        }
        if let Some(f) = &self.family {
            cfg.model = ModelSpec {
                name: "sampled_family".into(),
                params: json!({ "path": f }),
            };
        }
        cfg.plot |= self.plot;
        if let Some(dir) = cfg.output.parent() {
            if !dir.as_os_str().is_empty() {
                std::fs::create_dir_all(dir)?;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<()> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Fig1(c) => {
            let cfg = c.resolve(Experiment::Fig1)?;
            let res = sweep::run_fig1(&cfg)?;
            writeln!(out, "rows: {}", res.rows.len())?;
            writeln!(out, "max numeric gap: {:.3e}", res.max_numeric_gap)?;
            sweep::announce(&mut out, "csv", &res.csv)?;
            if cfg.plot {
                let svg = cfg.output_path(".svg");
                std::fs::write(&svg, plot::phase_scatter(&res.rows, "wrapped phase vs T"))?;
                sweep::announce(&mut out, "svg", &svg)?;
            }
        }
        Command::Fig2(c) => {
            let cfg = c.resolve(Experiment::Fig2)?;
            let res = sweep::run_fig2(&cfg)?;
            for s in &res.summaries {
                writeln!(
                    out,
                    "Gamma w0 = {:.4}: limit {:.4}, phase at T = {} is {:.4} (gap {:.3e}), path fidelity {:.6}",
                    s.gamma_omega0, s.limit, s.t_max, s.gp_at_t_max, s.gap_to_limit, s.adiabatic_fidelity
                )?;
            }
            for p in &res.csvs {
                sweep::announce(&mut out, "csv", p)?;
            }
            sweep::announce(&mut out, "limits", &res.summary_csv)?;
            if cfg.plot {
                for (i, (g, rows)) in res.tables.iter().enumerate() {
                    let svg = cfg.output_path(&format!("_gamma{i}.svg"));
                    std::fs::write(
                        &svg,
                        plot::phase_scatter(rows, &format!("Gamma = {g:.4e} us")),
                    )?;
                    sweep::announce(&mut out, "svg", &svg)?;
                }
            }
        }
        Command::Fig3(c) => {
            let cfg = c.resolve(Experiment::Fig3)?;
            let res = fig3::run_fig3(&cfg)?;
            for s in &res.summaries {
                writeln!(
                    out,
                    "{}: Omega {:.6}, crossings {}, Omega' {:.6}, phase from angle {:.6}, corrected {:.6}, exact {:.6}",
                    s.path, s.omega, s.crossings, s.omega_corrected, s.gp_predicted, s.gp_corrected, s.gp_exact
                )?;
            }
            for ch in &res.checks {
                writeln!(
                    out,
                    "[{}] {}: {:.4} (reference {})",
                    if ch.pass { "ok" } else { "differs" },
                    ch.name,
                    ch.value,
                    ch.threshold
                )?;
            }
            for f in &res.files {
                sweep::announce(&mut out, "csv", f)?;
            }
            if cfg.plot {
                let svg = cfg.output_path(".svg");
                let view = plot::bloch_view(&[
                    (&res.adiabatic, "red"),
                    (&res.perfect, "black"),
                    (&res.imperfect, "blue"),
                ]);
                std::fs::write(&svg, view)?;
                sweep::announce(&mut out, "svg", &svg)?;
            }
        }
        Command::Verify(c) => {
            let cfg = c.resolve(Experiment::Verify)?;
            let rep = verify::run_verify(&cfg)?;
            writeln!(
                out,
                "family: {} (time unit {:.4e} us)",
                rep.family, rep.time_unit
            )?;
            for ch in &rep.checks {
                writeln!(out, "{}", ch.line())?;
            }
            sweep::announce(&mut out, "csv", &rep.csv)?;
            if !rep.passed() {
                let failed: Vec<_> = rep
                    .checks
                    .iter()
                    .filter(|c| !c.pass)
                    .map(|c| c.name.as_str())
                    .collect();
                return Err(ExperimentError::Battery(failed.join(", ")));
            }
        }
        Command::ValidateFamily(c) => {
            let cfg = c.resolve(Experiment::ValidateFamily)?;
            let res = validate::run_validate(&cfg)?;
            writeln!(out, "{}", serde_json::to_string_pretty(&res.report)?)?;
            sweep::announce(&mut out, "json", &res.json)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
