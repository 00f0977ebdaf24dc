//! Configured runs, parameter sweeps and re-checks of saved series.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::{KeyValues, RunConfig};
use super::initial::initial_condition;
use crate::diagnostics::{
    energy_balance_residual, gamma_log_derivative_check, gronwall_bound_check, series, DiagnosticRecord,
    DiagnosticTracker, GammaReport, GronwallReport, MIN_GAMMA_SAMPLES,
};
use crate::dynamics::{SolutionPair, SystemParams};
use crate::error::{Error, Result};
use crate::integrator::{Integrator, TimeStep};
use crate::multiplier::{DissipationSpec, GFunction};
use crate::par;
use crate::spectral::{snapshot, SpectralField};

/// Relative divergence above which a record counts as non-solenoidal.
pub const DIVERGENCE_TOLERANCE: f64 = 1e-12;

/// Default tolerance on the energy-balance residual for `check`.
pub const DEFAULT_ENERGY_TOLERANCE: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Ok,
    ConfigError,
    Blowup,
    CheckFailed,
}

impl RunStatus {
    pub fn exit_code(self) -> i32 {
        match self {
            RunStatus::Ok => 0,
            RunStatus::ConfigError => 2,
            RunStatus::Blowup => 3,
            RunStatus::CheckFailed => 4,
        }
    }
}

impl fmt::Display for RunStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RunStatus::Ok => "ok",
            RunStatus::ConfigError => "config_error",
            RunStatus::Blowup => "blowup",
            RunStatus::CheckFailed => "check_failed",
        })
    }
}

/// Process exit code for an error escaping the harness; 1 for I/O and
/// anything else not covered by [`RunStatus`].
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Config(_) => RunStatus::ConfigError.exit_code(),
        Error::BlowUp { .. } => RunStatus::Blowup.exit_code(),
        _ => 1,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GSummary {
    pub kind: String,
    pub params: BTreeMap<String, String>,
}

impl GSummary {
    fn of(g: &GFunction) -> Self {
        GSummary {
            kind: g.name().to_string(),
            params: g.params(),
        }
    }

    pub fn resolve(&self) -> Result<GFunction> {
        GFunction::from_catalog(&self.kind, &self.params)
    }
}

/// The physical parameters of a run, enough to re-check its series.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamsSummary {
    pub dim: usize,
    pub nu: f64,
    pub eta: f64,
    pub alpha: f64,
    pub beta: f64,
    pub g1: GSummary,
    pub g2: GSummary,
    pub nonlinear: bool,
    pub theorem_regime: bool,
}

impl ParamsSummary {
    pub fn of(p: &SystemParams) -> Self {
        ParamsSummary {
            dim: p.dim,
            nu: p.diss_u.coefficient(),
            eta: p.diss_b.coefficient(),
            alpha: p.diss_u.exponent(),
            beta: p.diss_b.exponent(),
            g1: GSummary::of(p.diss_u.g()),
            g2: GSummary::of(p.diss_b.g()),
            nonlinear: p.nonlinear,
            theorem_regime: p.theorem_regime(),
        }
    }

    pub fn to_params(&self) -> Result<SystemParams> {
        let mut p = SystemParams::new(
            self.dim,
            DissipationSpec::new(self.nu, self.alpha, self.g1.resolve()?)?,
            DissipationSpec::new(self.eta, self.beta, self.g2.resolve()?)?,
        )?;
        p.nonlinear = self.nonlinear;
        Ok(p)
    }
}

/// Inequality checks evaluated on a series.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CheckSummary {
    pub samples: usize,
    pub energy_residual: Option<f64>,
    pub gronwall: Option<GronwallReport>,
    pub gamma: Option<GammaReport>,
    pub max_x: f64,
    pub max_y_s: f64,
    pub max_gamma_norm: f64,
    pub max_split_ratio: f64,
    /// `∫₀^T ‖𝓛₁∇u‖²`.
    pub aux_integral: f64,
    pub max_divergence: f64,
    /// Invariant violations and missing checks, in words.
    pub notes: Vec<String>,
    /// Violations that make `check` fail.
    pub failures: Vec<String>,
}

impl CheckSummary {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs every check that the series and `params` allow. Failures are
/// non-finite constants, violated record invariants, divergence defects
/// above [`DIVERGENCE_TOLERANCE`] and an energy residual above
/// `energy_tolerance`.
pub fn check_series(
    records: &[DiagnosticRecord],
    params: Option<&ParamsSummary>,
    energy_tolerance: f64,
) -> CheckSummary {
    let mut s = CheckSummary {
        samples: records.len(),
        ..Default::default()
    };
    if records.is_empty() {
        s.failures.push("empty series".into());
        return s;
    }
    for r in records {
        s.max_x = s.max_x.max(r.x);
        s.max_y_s = s.max_y_s.max(r.y_s);
        s.max_gamma_norm = s.max_gamma_norm.max(r.gamma_norm);
        s.max_split_ratio = s.max_split_ratio.max(r.split_ratio());
        s.max_divergence = s.max_divergence.max(r.divergence);
    }
    s.aux_integral = records.last().unwrap().cum_diss_grad;

    let fields = |r: &DiagnosticRecord| [r.energy, r.x, r.y_s, r.gamma_norm, r.cum_diss, r.diss_u];
    if let Some(r) = records.iter().find(|r| fields(r).iter().any(|v| !(*v >= 0.0 && v.is_finite()))) {
        s.failures.push(format!("negative or non-finite record at t = {}", r.t));
    }
    if let Some(w) = records.windows(2).find(|w| !(w[1].t > w[0].t)) {
        s.failures.push(format!("times not increasing at t = {}", w[0].t));
    }
    if let Some(w) = records.windows(2).find(|w| w[1].cum_diss < w[0].cum_diss) {
        s.failures.push(format!("cum_diss decreases at t = {}", w[1].t));
    }
    if s.max_divergence > DIVERGENCE_TOLERANCE {
        s.failures.push(format!("divergence defect {:.3e}", s.max_divergence));
    }
    if !s.max_split_ratio.is_finite() {
        s.failures.push("splitting ratio is infinite".into());
    }

    match gamma_log_derivative_check(records) {
        Ok(rep) => {
            if !rep.constant.is_finite() {
                s.failures.push("gamma log-derivative constant is infinite".into());
            }
            s.gamma = Some(rep);
        }
        Err(_) => s.notes.push(format!(
            "gamma log-derivative check skipped: {} samples, need {MIN_GAMMA_SAMPLES}",
            records.len()
        )),
    }

    let Some(p) = params else {
        s.notes.push("parameters unknown: energy and Gronwall checks skipped".into());
        return s;
    };
    if !p.theorem_regime {
        s.notes.push("parameters outside the theorem regime; Gronwall check is informative only".into());
    }
    match energy_balance_residual(records, p.nu, p.eta) {
        Ok(res) => {
            if !(res <= energy_tolerance) {
                s.failures.push(format!("energy residual {res:.3e} exceeds {energy_tolerance:.1e}"));
            }
            s.energy_residual = Some(res);
        }
        Err(e) => s.notes.push(format!("energy balance skipped: {e}")),
    }
    match p.g1.resolve().and_then(|g| gronwall_bound_check(records, &g)) {
        Ok(rep) => {
            if !rep.constant.is_finite() {
                s.failures.push("Gronwall constant is infinite".into());
            }
            s.gronwall = Some(rep);
        }
        Err(e) => s.failures.push(format!("Gronwall check failed: {e}")),
    }
    s
}

/// Everything a run reports, written as JSON next to the series.
#[derive(Clone, Debug, Serialize)]
pub struct RunSummary {
    pub status: RunStatus,
    pub message: Option<String>,
    pub dim: usize,
    pub points_per_axis: usize,
    pub params: ParamsSummary,
    pub initial_condition: String,
    pub initial_params: BTreeMap<String, String>,
    /// Fixed step, or `None` for adaptive stepping.
    pub dt: Option<f64>,
    pub t_end: f64,
    pub cadence: usize,
    pub gamma: f64,
    pub s: f64,
    pub steps: usize,
    pub final_time: f64,
    pub max_courant: f64,
    pub last_record: Option<DiagnosticRecord>,
    pub snapshots: Vec<PathBuf>,
    pub checks: CheckSummary,
}

#[derive(Clone, Debug)]
pub struct ExperimentOutcome {
    pub status: RunStatus,
    pub records: Vec<DiagnosticRecord>,
    /// Last state reached (the last finite one after a blow-up).
    pub final_state: SolutionPair,
    pub summary: RunSummary,
}

/// Runs `config` without touching the file system.
pub fn simulate(config: &RunConfig) -> Result<ExperimentOutcome> {
    run_inner(config, false)
}

/// Runs `config` and writes the series, summary and snapshots it names.
/// A blow-up is reported through the outcome status, not as an error.
pub fn run_experiment(config: &RunConfig) -> Result<ExperimentOutcome> {
    run_inner(config, true)
}

fn run_inner(config: &RunConfig, write: bool) -> Result<ExperimentOutcome> {
    let state0 = initial_condition(&config.initial.name, &config.initial.params, &config.grid)?;
    let integrator = Integrator::new(&config.params, &config.grid)?;
    let mut tracker = DiagnosticTracker::new(&config.params, config.settings);
    let mut pending = config.output.snapshot_times.clone();
    pending.sort_by(f64::total_cmp);
    let mut captured: Vec<SolutionPair> = Vec::new();
    let mut last = state0.clone();
    let result = integrator.run(&state0, &config.stepper, config.cadence, |state| {
        tracker.observe(state);
        while pending.first().is_some_and(|&t| state.time >= t - 1e-12) {
            pending.remove(0);
            captured.push(state.clone());
        }
        last = state.clone();
    });
    let (status, message, steps, max_courant, final_state) = match result {
        Ok(report) => (RunStatus::Ok, None, report.steps, report.max_courant, report.state),
        Err(e @ Error::BlowUp { .. }) => (RunStatus::Blowup, Some(e.to_string()), 0, f64::NAN, last),
        Err(e) => return Err(e),
    };
    let records = tracker.into_records();
    let params = ParamsSummary::of(&config.params);
    let mut checks = check_series(&records, Some(&params), f64::INFINITY);
    checks.failures.retain(|f| !f.starts_with("energy residual"));

    let mut snapshots = Vec::new();
    if let (true, Some(dir)) = (write, &config.output.snapshots) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        if config.output.snapshot_times.is_empty() {
            captured.push(final_state.clone());
        }
        for (i, s) in captured.iter().enumerate() {
            let path = dir.join(format!("snapshot_{i:03}.lmhd"));
            write_snapshot(&path, s)?;
            snapshots.push(path);
        }
    }

    let summary = RunSummary {
        status,
        message,
        dim: config.grid.dim(),
        points_per_axis: config.grid.points_per_axis(),
        params,
        initial_condition: config.initial.name.clone(),
        initial_params: config.initial.params.clone(),
        dt: match config.stepper.time_step {
            TimeStep::Fixed(dt) => Some(dt),
            TimeStep::Adaptive { .. } => None,
        },
        t_end: config.stepper.t_end,
        cadence: config.cadence,
        gamma: config.settings.gamma,
        s: config.settings.s,
        steps,
        final_time: final_state.time,
        max_courant,
        last_record: records.last().copied(),
        snapshots,
        checks,
    };
    if write {
        if let Some(path) = &config.output.series {
            create_parent(path)?;
            series::write_series(path, &records)?;
        }
        if let Some(path) = &config.output.summary {
            write_summary(path, &summary)?;
        }
    }
    Ok(ExperimentOutcome {
        status,
        records,
        final_state,
        summary,
    })
}

/// `u` components then `b` components in one snapshot file.
pub fn write_snapshot(path: &Path, state: &SolutionPair) -> Result<()> {
    let fields: Vec<SpectralField> = state.u.components().iter().chain(state.b.components()).cloned().collect();
    snapshot::write(path, &fields)
}

fn create_parent(path: &Path) -> Result<()> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => fs::create_dir_all(dir).map_err(|e| Error::io(dir, e)),
        _ => Ok(()),
    }
}

pub fn write_summary(path: &Path, summary: &impl Serialize) -> Result<()> {
    create_parent(path)?;
    let text = serde_json::to_string_pretty(summary).map_err(|e| Error::Series(e.to_string()))?;
    fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
}

/// Reads the `params` block of a summary written by [`run_experiment`].
pub fn read_summary_params(path: &Path) -> Result<ParamsSummary> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Error::Series(format!("{}: {e}", path.display())))?;
    serde_json::from_value(value["params"].clone())
        .map_err(|e| Error::Series(format!("{}: params block: {e}", path.display())))
}

/// Config key addressed by a sweep variable: `g1`/`g2` mean the kind of
/// that g function, anything else is taken as a full key.
fn sweep_key(var: &str) -> String {
    match var {
        "g1" | "g2" => format!("params.{var}.kind"),
        other => other.to_string(),
    }
}

fn suffixed(path: &Path, value: &str) -> PathBuf {
    let tag: String = value
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '.' || c == '-' { c } else { '_' })
        .collect();
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}_{tag}.{}", ext.to_string_lossy()),
        None => format!("{stem}_{tag}"),
    };
    path.with_file_name(name)
}

/// One config per value of `var`. Output paths get a `_<value>` suffix, and
/// sweeping a g function drops the parameters of the base kind.
pub fn sweep_configs(base: &KeyValues, var: &str, values: &[String]) -> Result<Vec<RunConfig>> {
    if values.is_empty() {
        return Err(Error::Config(format!("sweep over {var} has no values")));
    }
    let key = sweep_key(var);
    values
        .iter()
        .map(|v| {
            let mut kv = base.clone();
            if let Some(group) = key.strip_suffix("kind") {
                kv.remove_prefix(group);
            }
            kv.set(&key, v);
            for out in ["out.series", "out.summary", "out.snapshots"] {
                if let Some(p) = kv.get(out) {
                    let p = suffixed(Path::new(p), v);
                    kv.set(out, &p.to_string_lossy());
                }
            }
            if kv.get("out.summary").is_none() {
                if let Some(p) = kv.get("out.series") {
                    let p = Path::new(p).with_extension("summary.json");
                    kv.set("out.summary", &p.to_string_lossy());
                }
            }
            RunConfig::from_kv(&kv)
        })
        .collect()
}

/// Runs the sweep configs concurrently; each writes its own outputs.
pub fn run_sweep(configs: &[RunConfig]) -> Vec<Result<ExperimentOutcome>> {
    par::map_collect(configs, run_experiment)
}
