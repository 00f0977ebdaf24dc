use std::f64::consts::E;

use serde::{Deserialize, Serialize};

use crate::dynamics::{SolutionPair, SystemParams};
use crate::error::{Error, Result};
use crate::littlewood_paley::{grad_linf, l_grad_norm_sq};

/// Every tracked quantity at one instant. Cumulative integrals use the
/// trapezoid rule over the samples seen so far.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticRecord {
    pub t: f64,
    /// `½(‖u‖² + ‖b‖²)`.
    pub energy: f64,
    /// `‖𝓛₁u‖²`.
    pub diss_u: f64,
    /// `‖∇u‖² + ‖∇b‖²`.
    #[serde(rename = "X")]
    pub x: f64,
    /// `‖Λ^s u‖² + ‖Λ^s b‖²`.
    #[serde(rename = "Y_s")]
    pub y_s: f64,
    /// `‖Λ^γ u‖² + ‖Λ^γ b‖²`.
    pub gamma_norm: f64,
    /// `max_{i,j} |∂_j u_i|` on grid samples.
    pub grad_u_inf: f64,
    /// `g₁(M₁)√(ln M₁)‖𝓛₁u‖` with `M₁ = e + X`.
    pub split_low: f64,
    /// `M₁^{−1/2}‖𝓛₁∇u‖`.
    pub split_high: f64,
    /// `∫₀^t ‖𝓛₁u‖²`.
    pub cum_diss: f64,
    /// `‖𝓛₁∇u‖²`.
    pub diss_grad_u: f64,
    /// `∫₀^t ‖𝓛₁∇u‖²`.
    pub cum_diss_grad: f64,
    /// `‖𝓛₂b‖²`.
    pub diss_b: f64,
    /// `∫₀^t ‖𝓛₂b‖²`.
    pub cum_diss_b: f64,
    /// Largest relative divergence defect of `u` and `b`.
    pub divergence: f64,
}

impl DiagnosticRecord {
    /// `grad_u_inf / (split_low + split_high)`, 0 when everything vanishes.
    pub fn split_ratio(&self) -> f64 {
        let rhs = self.split_low + self.split_high;
        if rhs == 0.0 {
            if self.grad_u_inf == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            self.grad_u_inf / rhs
        }
    }
}

/// Sobolev orders used by the trackers.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DiagnosticSettings {
    pub gamma: f64,
    pub s: f64,
}

impl DiagnosticSettings {
    /// `γ = (3 + N)/2`, the midpoint of `(1 + N/2, 2 + N/2)`, and `s = 3 + N`.
    pub fn defaults(dim: usize) -> Self {
        let n = dim as f64;
        DiagnosticSettings {
            gamma: (3.0 + n) / 2.0,
            s: 3.0 + n,
        }
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        let n = dim as f64;
        if !(self.gamma > 1.0 + n / 2.0 && self.gamma < 2.0 + n / 2.0) {
            return Err(Error::InvalidParameter(format!(
                "gamma = {} must lie in ({}, {})",
                self.gamma,
                1.0 + n / 2.0,
                2.0 + n / 2.0
            )));
        }
        if !(self.s >= 0.0 && self.s.is_finite()) {
            return Err(Error::InvalidParameter(format!("s = {} must be >= 0", self.s)));
        }
        Ok(())
    }
}

/// Instantaneous record; cumulative fields are left at zero.
pub fn record(state: &SolutionPair, params: &SystemParams, settings: &DiagnosticSettings) -> DiagnosticRecord {
    let (u, b) = (&state.u, &state.b);
    let diss_u = params.diss_u.l_norm_sq(u);
    let diss_grad_u = l_grad_norm_sq(u, &params.diss_u);
    let x = u.gradient_sq_norm() + b.gradient_sq_norm();
    let m1 = E + x;
    DiagnosticRecord {
        t: state.time,
        energy: state.energy(),
        diss_u,
        x,
        y_s: u.hs_norm(settings.s).powi(2) + b.hs_norm(settings.s).powi(2),
        gamma_norm: u.hs_norm(settings.gamma).powi(2) + b.hs_norm(settings.gamma).powi(2),
        grad_u_inf: grad_linf(u),
        split_low: params.diss_u.g().eval(m1) * m1.ln().sqrt() * diss_u.sqrt(),
        split_high: diss_grad_u.sqrt() / m1.sqrt(),
        cum_diss: 0.0,
        diss_grad_u,
        cum_diss_grad: 0.0,
        diss_b: params.diss_b.l_norm_sq(b),
        cum_diss_b: 0.0,
        divergence: state.relative_divergence(),
    }
}

/// Accumulates records along a run.
#[derive(Clone, Debug)]
pub struct DiagnosticTracker {
    params: SystemParams,
    settings: DiagnosticSettings,
    records: Vec<DiagnosticRecord>,
}

impl DiagnosticTracker {
    pub fn new(params: &SystemParams, settings: DiagnosticSettings) -> Self {
        DiagnosticTracker {
            params: params.clone(),
            settings,
            records: Vec::new(),
        }
    }

    pub fn observe(&mut self, state: &SolutionPair) -> &DiagnosticRecord {
        let mut r = record(state, &self.params, &self.settings);
        if let Some(prev) = self.records.last() {
            let h = 0.5 * (r.t - prev.t);
            r.cum_diss = prev.cum_diss + h * (prev.diss_u + r.diss_u);
            r.cum_diss_grad = prev.cum_diss_grad + h * (prev.diss_grad_u + r.diss_grad_u);
            r.cum_diss_b = prev.cum_diss_b + h * (prev.diss_b + r.diss_b);
        }
        self.records.push(r);
        self.records.last().unwrap()
    }

    pub fn records(&self) -> &[DiagnosticRecord] {
        &self.records
    }

    pub fn last(&self) -> Option<&DiagnosticRecord> {
        self.records.last()
    }

    pub fn into_records(self) -> Vec<DiagnosticRecord> {
        self.records
    }
}
