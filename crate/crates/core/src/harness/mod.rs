//! Config-driven experiments: initial data, runs, sweeps and series checks.

mod config;
mod experiment;
mod initial;

pub use config::{InitialSpec, KeyValues, OutputSpec, RunConfig};
pub use experiment::{
    check_series, exit_code_for, read_summary_params, run_experiment, run_sweep, simulate, sweep_configs,
    write_snapshot, write_summary, CheckSummary, ExperimentOutcome, GSummary, ParamsSummary, RunStatus,
    RunSummary, DEFAULT_ENERGY_TOLERANCE, DIVERGENCE_TOLERANCE,
};
pub use initial::{initial_condition, NAMES as INITIAL_CONDITIONS};
