//! Flat `key = value` run configuration.
//!
//! ```text
//! # comment
//! grid.n = 2              # spatial dimension N
//! grid.points = 64        # points per axis
//! params.nu = 0.01
//! params.eta = 0
//! params.alpha = 2
//! params.g1.kind = power_log
//! params.g1.c = 0.5
//! ic.name = orszag_tang_2d
//! stepper.dt = 1e-3       # or "adaptive" (with stepper.cfl, stepper.dt_max)
//! stepper.t_end = 1
//! diag.cadence = 10
//! out.series = ot.csv
//! ```
//!
//! Relative output paths are resolved against the config file's directory.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::diagnostics::DiagnosticSettings;
use crate::dynamics::SystemParams;
use crate::error::{Error, Result};
use crate::integrator::{StepperConfig, TimeStep, DEFAULT_CFL};
use crate::multiplier::{DissipationSpec, GFunction};
use crate::spectral::Grid;

const SCALAR_KEYS: &[&str] = &[
    "grid.n",
    "grid.points",
    "params.nu",
    "params.eta",
    "params.alpha",
    "params.beta",
    "params.nonlinear",
    "params.require_theorem",
    "params.g1.kind",
    "params.g2.kind",
    "ic.name",
    "stepper.dt",
    "stepper.cfl",
    "stepper.dt_max",
    "stepper.t_end",
    "stepper.max_steps",
    "diag.cadence",
    "diag.gamma",
    "diag.s",
    "out.series",
    "out.summary",
    "out.snapshots",
    "out.snapshot_times",
];

/// Raw keys in file order semantics (last assignment wins).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct KeyValues {
    entries: BTreeMap<String, String>,
    base_dir: PathBuf,
}

impl KeyValues {
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value, got {raw:?}", no + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            if k.is_empty() {
                return Err(Error::Config(format!("line {}: empty key", no + 1)));
            }
            entries.insert(k.to_string(), v.to_string());
        }
        Ok(KeyValues {
            entries,
            base_dir: base_dir.to_path_buf(),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn set(&mut self, key: &str, value: &str) {
        self.entries.insert(key.to_string(), value.to_string());
    }

    /// Drops every key starting with `prefix`.
    pub fn remove_prefix(&mut self, prefix: &str) {
        self.entries.retain(|k, _| !k.starts_with(prefix));
    }

    pub fn base_dir(&self) -> &Path {
        &self.base_dir
    }

    /// Entries under `prefix.` (prefix stripped), excluding `skip`.
    fn group(&self, prefix: &str, skip: &str) -> BTreeMap<String, String> {
        self.entries
            .iter()
            .filter_map(|(k, v)| k.strip_prefix(prefix).map(|rest| (rest.to_string(), v.clone())))
            .filter(|(k, _)| k != skip)
            .collect()
    }

    fn parsed<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.get(key)
            .map(|v| {
                v.parse()
                    .map_err(|_| Error::Config(format!("{key}: cannot parse {v:?}")))
            })
            .transpose()
    }

    fn required<T: FromStr>(&self, key: &str) -> Result<T> {
        self.parsed(key)?
            .ok_or_else(|| Error::Config(format!("missing required key {key}")))
    }

    fn path(&self, key: &str) -> Option<PathBuf> {
        self.get(key).map(|p| self.base_dir.join(p))
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.entries {
            let _ = writeln!(s, "{k} = {v}");
        }
        s
    }
}

/// Initial-condition name with its parameters (`ic.<param>` keys).
#[derive(Clone, Debug, PartialEq)]
pub struct InitialSpec {
    pub name: String,
    pub params: BTreeMap<String, String>,
}

/// Output locations; all optional.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct OutputSpec {
    pub series: Option<PathBuf>,
    pub summary: Option<PathBuf>,
    pub snapshots: Option<PathBuf>,
    pub snapshot_times: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub grid: Grid,
    pub params: SystemParams,
    /// Reject parameters outside the regime `ν > 0, η = 0, α ≥ 1 + N/2`.
    pub require_theorem: bool,
    pub initial: InitialSpec,
    pub stepper: StepperConfig,
    pub cadence: usize,
    pub settings: DiagnosticSettings,
    pub output: OutputSpec,
}

fn check_known_keys(kv: &KeyValues) -> Result<()> {
    for k in kv.entries.keys() {
        let grouped = ["params.g1.", "params.g2.", "ic."].iter().any(|p| k.starts_with(p));
        if !grouped && !SCALAR_KEYS.contains(&k.as_str()) {
            return Err(Error::Config(format!("unknown key {k}")));
        }
    }
    Ok(())
}

fn parse_bool(kv: &KeyValues, key: &str, default: bool) -> Result<bool> {
    match kv.get(key) {
        None => Ok(default),
        Some("true" | "yes" | "1") => Ok(true),
        Some("false" | "no" | "0") => Ok(false),
        Some(v) => Err(Error::Config(format!("{key}: expected true or false, got {v:?}"))),
    }
}

fn config_err(e: Error) -> Error {
    match e {
        Error::Config(_) => e,
        other => Error::Config(other.to_string()),
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        Self::from_kv(&KeyValues::load(path)?)
    }

    pub fn from_kv(kv: &KeyValues) -> Result<Self> {
        Self::build(kv).map_err(config_err)
    }

    fn build(kv: &KeyValues) -> Result<Self> {
        check_known_keys(kv)?;
        let dim: usize = kv.required("grid.n")?;
        let points: usize = kv.required("grid.points")?;
        let grid = Grid::new(dim, points)?;

        let nu: f64 = kv.required("params.nu")?;
        let eta: f64 = kv.parsed("params.eta")?.unwrap_or(0.0);
        let alpha: f64 = kv.required("params.alpha")?;
        let beta: f64 = kv.parsed("params.beta")?.unwrap_or(alpha);
        let g = |n: &str| -> Result<GFunction> {
            let kind = kv.get(&format!("params.{n}.kind")).unwrap_or("constant_one");
            let g = GFunction::from_catalog(kind, &kv.group(&format!("params.{n}."), "kind"))?;
            g.check_sampled_monotone()?;
            Ok(g)
        };
        let mut params = SystemParams::new(
            dim,
            DissipationSpec::new(nu, alpha, g("g1")?)?,
            DissipationSpec::new(eta, beta, g("g2")?)?,
        )?;
        params.nonlinear = parse_bool(kv, "params.nonlinear", true)?;
        let require_theorem = parse_bool(kv, "params.require_theorem", false)?;
        if require_theorem {
            params.require_theorem_regime()?;
        }

        let initial = InitialSpec {
            name: kv
                .get("ic.name")
                .ok_or_else(|| Error::Config("missing required key ic.name".into()))?
                .to_string(),
            params: kv.group("ic.", "name"),
        };

        let t_end: f64 = kv.required("stepper.t_end")?;
        let time_step = match kv.get("stepper.dt") {
            None => return Err(Error::Config("missing required key stepper.dt".into())),
            Some("adaptive") => TimeStep::Adaptive {
                cfl: kv.parsed("stepper.cfl")?.unwrap_or(DEFAULT_CFL),
                dt_max: kv.parsed("stepper.dt_max")?.unwrap_or(1e-2),
            },
            Some(_) => TimeStep::Fixed(kv.required("stepper.dt")?),
        };
        let stepper = StepperConfig {
            time_step,
            t_end,
            max_steps: kv.parsed("stepper.max_steps")?.unwrap_or(usize::MAX),
        };
        stepper.validate()?;

        let cadence: usize = kv.parsed("diag.cadence")?.unwrap_or(1);
        if cadence == 0 {
            return Err(Error::Config("diag.cadence must be >= 1".into()));
        }
        let defaults = DiagnosticSettings::defaults(dim);
        let settings = DiagnosticSettings {
            gamma: kv.parsed("diag.gamma")?.unwrap_or(defaults.gamma),
            s: kv.parsed("diag.s")?.unwrap_or(defaults.s),
        };
        settings.validate(dim)?;

        let snapshot_times = match kv.get("out.snapshot_times") {
            None => Vec::new(),
            Some(list) => list
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| {
                    s.trim()
                        .parse()
                        .map_err(|_| Error::Config(format!("out.snapshot_times: bad time {s:?}")))
                })
                .collect::<Result<_>>()?,
        };
        let series = kv.path("out.series");
        let summary = kv.path("out.summary").or_else(|| series.as_ref().map(|s| s.with_extension("summary.json")));
        let output = OutputSpec {
            series,
            summary,
            snapshots: kv.path("out.snapshots"),
            snapshot_times,
        };
        Ok(RunConfig {
            grid,
            params,
            require_theorem,
            initial,
            stepper,
            cadence,
            settings,
            output,
        })
    }
}
