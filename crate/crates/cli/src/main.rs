//! `logmhd`: run, sweep and check magnetohydrodynamics experiments.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use logmhd::diagnostics::series::read_series;
use logmhd::harness::{
    check_series, exit_code_for, read_summary_params, run_experiment, run_sweep, sweep_configs, KeyValues,
    ParamsSummary, RunConfig, RunStatus, DEFAULT_ENERGY_TOLERANCE,
};
use logmhd::multiplier::{osgood_classify, GFunction, UpperLimit};
use logmhd::Error;

#[derive(Parser)]
#[command(name = "logmhd", version, about = "Pseudo-spectral MHD with logarithmically weakened dissipation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment from a key = value config.
    Run { config: PathBuf },
    /// Run one experiment per value of a config variable.
    Sweep {
        config: PathBuf,
        /// `<var>=<v1,v2,...>`; `g1` and `g2` select the g function kind.
        #[arg(long, value_name = "VAR=LIST")]
        vary: String,
    },
    /// Re-run the inequality checks on a saved series.
    Check {
        series: PathBuf,
        /// Take ν, η and g₁ from this run config.
        #[arg(long, conflicts_with = "summary")]
        config: Option<PathBuf>,
        /// Take ν, η and g₁ from this run summary (default: `<series>.summary.json` if present).
        #[arg(long)]
        summary: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_ENERGY_TOLERANCE)]
        energy_tol: f64,
    },
    /// Classify the integral ∫ dτ/(g²(τ) ln(τ) τ) as divergent or convergent.
    Osgood {
        /// Catalog name: constant_one, power_log, iterated_log, power, spiky, tabulated.
        g: String,
        /// Parameters as key=value, e.g. `eps=0.1`.
        params: Vec<String>,
        /// Upper limit: a radius R, or `loglog:y` for R = exp(exp(y)).
        #[arg(long, default_value = "loglog:1000")]
        limit: UpperLimit,
        #[arg(long, default_value_t = 4000)]
        samples: usize,
        /// Print the full verdict as JSON.
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match execute(cli.command) {
        Ok(status) => status.exit_code(),
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    };
    ExitCode::from(code as u8)
}

fn execute(command: Command) -> logmhd::Result<RunStatus> {
    match command {
        Command::Run { config } => run(&config),
        Command::Sweep { config, vary } => sweep(&config, &vary),
        Command::Check {
            series,
            config,
            summary,
            energy_tol,
        } => check(&series, config.as_deref(), summary.as_deref(), energy_tol),
        Command::Osgood {
            g,
            params,
            limit,
            samples,
            json,
        } => osgood(&g, &params, limit, samples, json),
    }
}

fn run(path: &Path) -> logmhd::Result<RunStatus> {
    let config = RunConfig::load(path)?;
    let out = run_experiment(&config)?;
    let s = &out.summary;
    println!(
        "status={} steps={} t={} max_X={:.6e} gronwall_C={} records={}",
        s.status,
        s.steps,
        s.final_time,
        s.checks.max_x,
        s.checks.gronwall.as_ref().map_or("n/a".into(), |g| format!("{:.6e}", g.constant)),
        out.records.len()
    );
    if let Some(msg) = &s.message {
        eprintln!("{msg}");
    }
    Ok(out.status)
}

fn sweep(path: &Path, vary: &str) -> logmhd::Result<RunStatus> {
    let (var, list) = vary
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("--vary expects VAR=v1,v2,..., got {vary:?}")))?;
    let values: Vec<String> = list.split(',').map(str::trim).filter(|v| !v.is_empty()).map(String::from).collect();
    let base = KeyValues::load(path)?;
    let configs = sweep_configs(&base, var.trim(), &values)?;
    let mut worst = RunStatus::Ok;
    println!("{var:<16} {:<8} {:>14} {:>14} {:>14}", "status", "max_X", "gronwall_C", "aux_integral");
    for (v, out) in values.iter().zip(run_sweep(&configs)) {
        match out {
            Ok(out) => {
                let c = &out.summary.checks;
                println!(
                    "{v:<16} {:<8} {:>14.6e} {:>14} {:>14.6e}",
                    out.status.to_string(),
                    c.max_x,
                    c.gronwall.as_ref().map_or("n/a".into(), |g| format!("{:.6e}", g.constant)),
                    c.aux_integral
                );
                if out.status != RunStatus::Ok {
                    worst = out.status;
                }
            }
            Err(e) => {
                println!("{v:<16} error: {e}");
                return Err(e);
            }
        }
    }
    Ok(worst)
}

fn check(series: &Path, config: Option<&Path>, summary: Option<&Path>, tol: f64) -> logmhd::Result<RunStatus> {
    let records = read_series(series)?;
    let params: Option<ParamsSummary> = match (config, summary) {
        (Some(c), _) => Some(ParamsSummary::of(&RunConfig::load(c)?.params)),
        (None, Some(s)) => Some(read_summary_params(s)?),
        (None, None) => {
            let sibling = series.with_extension("summary.json");
            sibling.exists().then(|| read_summary_params(&sibling)).transpose()?
        }
    };
    let report = check_series(&records, params.as_ref(), tol);
    println!("{}", serde_json::to_string_pretty(&report).map_err(|e| Error::Series(e.to_string()))?);
    for f in &report.failures {
        eprintln!("FAIL: {f}");
    }
    Ok(if report.passed() { RunStatus::Ok } else { RunStatus::CheckFailed })
}

fn osgood(name: &str, raw: &[String], limit: UpperLimit, samples: usize, json: bool) -> logmhd::Result<RunStatus> {
    let params = raw
        .iter()
        .map(|p| {
            p.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| Error::Config(format!("parameter {p:?} is not key=value")))
        })
        .collect::<logmhd::Result<BTreeMap<_, _>>>()?;
    let g = GFunction::from_catalog(name, &params)?;
    let verdict = osgood_classify(&g, limit, samples).map_err(|e| Error::Config(e.to_string()))?;
    if json {
        println!("{}", serde_json::to_string_pretty(&verdict).map_err(|e| Error::Series(e.to_string()))?);
    } else {
        println!(
            "{} (partial integral {:.6e} up to {})",
            verdict.classification, verdict.partial_integral, verdict.upper_limit_used
        );
    }
    Ok(RunStatus::Ok)
}
