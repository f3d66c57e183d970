use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use super::config::{ExperimentConfig, ExperimentKind};
use super::output::{fmt_real, write_json, OutputEntry, Table};
use crate::bridge::{run_scale_scan, ScaleExperiment};
use crate::data::normalize_lx2_hy1;
use crate::error::{Error, Result};
use crate::morawetz::{morawetz_series, summarize, MorawetzWeight};
use crate::profile::{extract_bubbles_with, TimeWindow};
use crate::resonant::{evolve_resonant, ModeVector};
use crate::solver::{evolve, evolve_two_sided, perturbation_experiment, DiagnosticsRecord};
use crate::spectral::{Field, Grid};

pub const MANIFEST_FILE: &str = "manifest.json";

const SIMULATE_COLUMNS: &[&str] = &["t", "mass", "energy", "px", "py", "h1", "running_strichartz"];
const RESONANT_COLUMNS: &[&str] = &["t", "mass", "l2h1", "hamiltonian", "running_scattering", "truncation_fraction"];
const SCAN_COLUMNS: &[&str] = &["lambda", "sup_error", "resid_hi_l43", "resid_full_l43", "initial_error"];
const MORAWETZ_COLUMNS: &[&str] = &["t", "M", "rigidity_integrand", "bound"];
const RIGIDITY_COLUMNS: &[&str] = &["horizon", "rigidity", "sup_abs_m", "ratio", "m_increment", "max_bound_ratio"];
const PROFILE_COLUMNS: &[&str] = &[
    "iteration",
    "level",
    "cube_i1",
    "cube_i2",
    "lambda",
    "t0",
    "x0_1",
    "x0_2",
    "xi_1",
    "xi_2",
    "y0",
    "score",
    "captured_l2",
    "captured_l2h1",
    "remainder_l2",
    "remainder_l2h1",
    "decoupling_defect",
];
const PERTURBATION_COLUMNS: &[&str] =
    &["forcing_amplitude", "forcing_norm", "sup_difference", "final_difference", "ratio"];

/// CSV files and their columns (after `config_hash`) for each experiment.
pub fn columns_of(kind: ExperimentKind) -> Vec<(&'static str, &'static [&'static str])> {
    match kind {
        ExperimentKind::Simulate => vec![("diagnostics.csv", SIMULATE_COLUMNS)],
        ExperimentKind::Resonant => vec![("resonant.csv", RESONANT_COLUMNS)],
        ExperimentKind::ApproxScan => vec![("approx_scan.csv", SCAN_COLUMNS)],
        ExperimentKind::Morawetz => vec![("morawetz.csv", MORAWETZ_COLUMNS), ("rigidity.csv", RIGIDITY_COLUMNS)],
        ExperimentKind::Profiles => vec![("profiles.csv", PROFILE_COLUMNS)],
        ExperimentKind::Perturbation => vec![("perturbation.csv", PERTURBATION_COLUMNS)],
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Completed,
    /// Divergence or edge contamination; partial outputs were written.
    NumericalFailure,
}

#[derive(Clone, Debug, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub experiment: ExperimentKind,
    pub config_hash: String,
    pub config: ExperimentConfig,
    pub threads: usize,
    pub status: RunStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    pub wall_time_s: f64,
    pub outputs: Vec<OutputEntry>,
    pub results: Value,
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub manifest: Manifest,
}

impl RunOutcome {
    pub fn status(&self) -> RunStatus {
        self.manifest.status
    }
}

struct Artifacts {
    tables: Vec<Table>,
    json: Vec<(&'static str, Value)>,
    results: Value,
    /// Divergence or contamination message; the tables hold partial rows.
    failure: Option<String>,
}

impl Artifacts {
    fn new(tables: Vec<Table>) -> Self {
        Self { tables, json: Vec::new(), results: Value::Null, failure: None }
    }

    fn failed(tables: Vec<Table>, error: Error) -> Self {
        Self { failure: Some(error.to_string()), ..Self::new(tables) }
    }
}

fn is_numerical(e: &Error) -> bool {
    matches!(e, Error::Divergence { .. } | Error::Contamination { .. })
}

fn initial_data(cfg: &ExperimentConfig, grid: &Grid) -> Field {
    let u0 = cfg.data.build(grid, cfg.seed);
    match cfg.normalize_l2h1 {
        Some(target) => normalize_lx2_hy1(u0, target),
        None => u0,
    }
}

fn diagnostics_row(r: &DiagnosticsRecord) -> [f64; 7] {
    [r.t, r.mass, r.energy, r.momentum[0], r.momentum[1], r.lx2_hy1, r.running_strichartz]
}

/// Runs the configured experiment and writes its artifacts into `out_dir`
/// (created if missing). Divergence and edge contamination are reported
/// through [`RunStatus::NumericalFailure`] after writing partial outputs;
/// other errors are returned.
pub fn run(cfg: &ExperimentConfig, out_dir: &Path) -> Result<RunOutcome> {
    cfg.validate()?;
    let clock = Instant::now();
    let hash = cfg.hash();
    let grid = cfg.grid.build()?;
    let u0 = initial_data(cfg, &grid);

    let artifacts = execute(cfg, &u0, &hash)?;
    let status = if artifacts.failure.is_some() { RunStatus::NumericalFailure } else { RunStatus::Completed };

    std::fs::create_dir_all(out_dir)?;
    let mut outputs = Vec::new();
    for t in &artifacts.tables {
        outputs.push(t.write(out_dir)?);
    }
    for (file, value) in &artifacts.json {
        outputs.push(write_json(out_dir, file, value)?);
    }
    let manifest = Manifest {
        tool: "waveguide",
        version: env!("CARGO_PKG_VERSION"),
        experiment: cfg.experiment,
        config_hash: hash,
        config: cfg.clone(),
        threads: rayon::current_num_threads(),
        status,
        message: artifacts.failure,
        wall_time_s: clock.elapsed().as_secs_f64(),
        outputs,
        results: artifacts.results,
    };
    write_json(out_dir, MANIFEST_FILE, &manifest)?;
    Ok(RunOutcome { manifest })
}

fn execute(cfg: &ExperimentConfig, u0: &Field, hash: &str) -> Result<Artifacts> {
    let (file, columns) = columns_of(cfg.experiment)[0];
    let mut table = Table::new(file, columns, hash);

    match cfg.experiment {
        ExperimentKind::Simulate => {
            let solver = cfg.solver.clone().without_slices();
            match evolve(u0, &solver) {
                Ok(ev) => {
                    for r in &ev.diagnostics {
                        table.push_reals(&diagnostics_row(r));
                    }
                    let mut a = Artifacts::new(vec![table]);
                    a.results = json!({
                        "final": ev.final_record(),
                        "max_conservation_drift": ev.max_conservation_drift(),
                    });
                    Ok(a)
                }
                Err(Error::Divergence { step, time, reason, partial }) => {
                    for r in &partial {
                        table.push_reals(&diagnostics_row(r));
                    }
                    let e = Error::Divergence { step, time, reason, partial: Vec::new() };
                    Ok(Artifacts::failed(vec![table], e))
                }
                Err(e) => Err(e),
            }
        }
        ExperimentKind::Resonant => {
            let p = cfg.resonant_params();
            let v0 = ModeVector::from_field(u0, p.jmax)?;
            let solver = cfg.solver.clone().without_slices();
            match evolve_resonant(&v0, &solver) {
                Ok(ev) => {
                    for r in &ev.diagnostics {
                        table.push_reals(&[r.t, r.mass, r.l2h1, r.hamiltonian, r.running_scattering, r.truncation_fraction]);
                    }
                    let mut a = Artifacts::new(vec![table]);
                    a.results = json!({ "final": ev.diagnostics.last() });
                    Ok(a)
                }
                Err(e) if is_numerical(&e) => Ok(Artifacts::failed(vec![table], e)),
                Err(e) => Err(e),
            }
        }
        ExperimentKind::ApproxScan => {
            let p = cfg.approx_scan_params();
            let mut exp = ScaleExperiment::new(u0.clone(), p.lambdas.clone(), p.horizon, p.jmax);
            exp.dt = cfg.solver.dt;
            exp.stride = p.stride;
            let report = run_scale_scan(&exp)?;
            for r in &report.rows {
                table.push_reals(&[r.lambda, r.sup_error, r.resid_hi_l43, r.resid_full_l43, r.initial_error]);
            }
            let mut a = Artifacts::new(vec![table]);
            a.results = json!({
                "rows": report.rows,
                "captured_fraction": report.captured_fraction,
                "residual_ratios": report.residual_ratios(),
                "errors_nonincreasing": report.errors_nonincreasing(),
            });
            Ok(a)
        }
        ExperimentKind::Morawetz => {
            let p = cfg.morawetz_params();
            let weight = MorawetzWeight::new(p.r0)?;
            let ev = match evolve_two_sided(u0, &cfg.solver) {
                Ok(ev) => ev,
                Err(e) if is_numerical(&e) => return Ok(Artifacts::failed(Vec::new(), e)),
                Err(e) => return Err(e),
            };
            let records = match morawetz_series(&ev.slices, &weight) {
                Ok(r) => r,
                Err(e) if is_numerical(&e) => return Ok(Artifacts::failed(Vec::new(), e)),
                Err(e) => return Err(e),
            };
            for r in &records {
                table.push_reals(&[r.t, r.m, r.rigidity_integrand, r.bound]);
            }
            let t_end = ev.slices.times().last().copied().unwrap_or(0.0);
            let horizons = if p.horizons.is_empty() {
                vec![0.25 * t_end, 0.5 * t_end, t_end]
            } else {
                p.horizons.clone()
            };
            let (file, columns) = columns_of(ExperimentKind::Morawetz)[1];
            let mut summary = Table::new(file, columns, hash);
            let mut summaries = Vec::new();
            for h in horizons {
                let s = summarize(&records, h)?;
                summary.push_reals(&[s.horizon, s.rigidity, s.sup_abs_m, s.ratio, s.m_increment, s.max_bound_ratio]);
                summaries.push(s);
            }
            let mut a = Artifacts::new(vec![table, summary]);
            a.results = json!({ "r0": p.r0, "summaries": summaries });
            Ok(a)
        }
        ExperimentKind::Profiles => {
            let p = cfg.profiles_params();
            let window = TimeWindow::new(p.window, p.samples)?;
            let e = extract_bubbles_with(u0, p.max_bubbles, &window, p.kappa)?;
            for it in &e.iterations {
                let f = &it.frame;
                let mut cells = vec![
                    it.iteration.to_string(),
                    it.cube.level.to_string(),
                    it.cube.index[0].to_string(),
                    it.cube.index[1].to_string(),
                ];
                cells.extend(
                    [
                        f.lambda,
                        f.t0,
                        f.x0[0],
                        f.x0[1],
                        f.xi[0],
                        f.xi[1],
                        f.y0,
                        it.score,
                        it.captured_l2,
                        it.captured_l2h1,
                        it.remainder_l2,
                        it.remainder_l2h1,
                        it.decoupling_defect,
                    ]
                    .iter()
                    .map(|v| fmt_real(*v)),
                );
                table.push(cells);
            }
            let report = json!({
                "config_hash": hash,
                "kappa": p.kappa,
                "window": p.window,
                "samples": p.samples,
                "stopped_early": e.stopped_early,
                "iterations": e.iterations,
            });
            let mut a = Artifacts::new(vec![table]);
            a.results = json!({
                "bubbles": e.bubbles.len(),
                "stopped_early": e.stopped_early,
                "captured_l2": e.bubbles.iter().map(|b| b.captured_l2).sum::<f64>(),
            });
            a.json.push(("profiles.json", report));
            Ok(a)
        }
        ExperimentKind::Perturbation => {
            let p = cfg.perturbation_params();
            match perturbation_experiment(u0, p.amplitude, &cfg.solver.clone().without_slices()) {
                Ok(r) => {
                    table.push_reals(&[r.forcing_amplitude, r.forcing_norm, r.sup_difference, r.final_difference, r.ratio]);
                    let mut a = Artifacts::new(vec![table]);
                    a.results = json!(r);
                    Ok(a)
                }
                Err(e) if is_numerical(&e) => Ok(Artifacts::failed(vec![table], e)),
                Err(e) => Err(e),
            }
        }
    }
}
