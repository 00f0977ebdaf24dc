use std::f64::consts::E;

use serde::Serialize;

use super::record::DiagnosticRecord;
use crate::error::{Error, Result};
use crate::multiplier::{osgood_primitive, GFunction};

/// Minimum number of samples for the finite-difference check.
pub const MIN_GAMMA_SAMPLES: usize = 50;

/// `max_t |E(t) − E(0) + ν∫‖𝓛₁u‖² + η∫‖𝓛₂b‖²| / E(0)`.
pub fn energy_balance_residual(series: &[DiagnosticRecord], nu: f64, eta: f64) -> Result<f64> {
    if series.len() < 3 {
        return Err(Error::InvalidParameter(format!(
            "energy balance needs at least 3 records, got {}",
            series.len()
        )));
    }
    let e0 = series[0].energy;
    if !(e0 > 0.0) {
        return Err(Error::InvalidParameter("energy balance needs nonzero initial energy".into()));
    }
    Ok(series
        .iter()
        .map(|r| (r.energy - e0 + nu * r.cum_diss + eta * r.cum_diss_b).abs() / e0)
        .fold(0.0, f64::max))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GronwallReport {
    /// Smallest `C` with `F(e+X(t)) − F(e+X(0)) ≤ C ∫₀^t (1 + ‖𝓛₁u‖²)` over the series.
    pub constant: f64,
    /// Largest left-hand side seen.
    pub max_lhs: f64,
    pub samples: usize,
}

/// Integrated H¹ estimate with `F(y) = ∫_e^y dτ/(g²(τ) ln(τ) τ)`.
pub fn gronwall_bound_check(series: &[DiagnosticRecord], g1: &GFunction) -> Result<GronwallReport> {
    let Some(first) = series.first() else {
        return Err(Error::InvalidParameter("empty series".into()));
    };
    let f0 = osgood_primitive(g1, E + first.x)?;
    let mut constant: f64 = 0.0;
    let mut max_lhs = f64::NEG_INFINITY;
    for r in &series[1..] {
        let lhs = osgood_primitive(g1, E + r.x)? - f0;
        let rhs = (r.t - first.t) + (r.cum_diss - first.cum_diss);
        max_lhs = max_lhs.max(lhs);
        if lhs > 0.0 {
            constant = constant.max(lhs / rhs);
        }
    }
    Ok(GronwallReport {
        constant,
        max_lhs: if series.len() > 1 { max_lhs } else { 0.0 },
        samples: series.len(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GammaReport {
    /// Smallest `C` with `∂_t ln(e + ‖Λ^γ(u,b)‖²) ≤ C(‖𝓛₁u‖ + ‖𝓛₁∇u‖)` at every sample.
    pub constant: f64,
    pub max_log_derivative: f64,
    pub samples: usize,
}

/// Forward differences of `ln(e + gamma_norm)` against the right-hand side
/// averaged over each interval.
pub fn gamma_log_derivative_check(series: &[DiagnosticRecord]) -> Result<GammaReport> {
    if series.len() < MIN_GAMMA_SAMPLES {
        return Err(Error::InvalidParameter(format!(
            "log-derivative check needs at least {MIN_GAMMA_SAMPLES} samples, got {}",
            series.len()
        )));
    }
    let rhs = |r: &DiagnosticRecord| r.diss_u.sqrt() + r.diss_grad_u.sqrt();
    let mut constant: f64 = 0.0;
    let mut max_d = f64::NEG_INFINITY;
    for w in series.windows(2) {
        let dt = w[1].t - w[0].t;
        if !(dt > 0.0) {
            return Err(Error::InvalidParameter(format!("series times not increasing at t = {}", w[0].t)));
        }
        let d = ((E + w[1].gamma_norm).ln() - (E + w[0].gamma_norm).ln()) / dt;
        max_d = max_d.max(d);
        if d > 0.0 {
            let bound = 0.5 * (rhs(&w[0]) + rhs(&w[1]));
            constant = constant.max(if bound > 0.0 { d / bound } else { f64::INFINITY });
        }
    }
    Ok(GammaReport {
        constant,
        max_log_derivative: max_d,
        samples: series.len(),
    })
}
