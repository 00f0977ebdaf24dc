//! Proof quantities tracked along a trajectory and the numerical checks of
//! the a priori estimates built on them.

mod checks;
mod record;
pub mod series;

pub use checks::{
    energy_balance_residual, gamma_log_derivative_check, gronwall_bound_check, GammaReport, GronwallReport,
    MIN_GAMMA_SAMPLES,
};
pub use record::{record, DiagnosticRecord, DiagnosticSettings, DiagnosticTracker};

#[cfg(test)]
mod tests;
