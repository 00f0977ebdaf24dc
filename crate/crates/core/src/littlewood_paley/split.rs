use std::f64::consts::E;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::multiplier::DissipationSpec;
use crate::par;
use crate::spectral::VectorField;

/// The two sides of the frequency-split bound
/// `‖∇u‖_∞ ≲ g(M₁)√(ln M₁)‖𝓛u‖ + M₁^{−1/2}‖𝓛∇u‖`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GradSplit {
    pub low_term: f64,
    pub high_term: f64,
    pub lhs: f64,
}

impl GradSplit {
    /// `lhs / (low + high)`, 0 when both sides vanish.
    pub fn ratio(&self) -> f64 {
        let rhs = self.low_term + self.high_term;
        if rhs == 0.0 {
            if self.lhs == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            self.lhs / rhs
        }
    }
}

/// `‖𝓛∇u‖²_{L²} = Σ_{i,j} ‖𝓛 ∂_j u_i‖²`.
pub fn l_grad_norm_sq(u: &VectorField, diss: &DissipationSpec) -> f64 {
    let grid = u.grid();
    let table = diss.symbol_table(grid);
    let comps = u.components();
    let s = par::sum_indexed(grid.len(), |i| {
        let k = grid.derivative_wavevector(i);
        let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        let m = table[i];
        k2 * m * m * comps.iter().map(|c| c.coeffs()[i].norm_sqr()).sum::<f64>()
    });
    grid.domain_volume() * s
}

/// `max_{i,j} max_x |∂_j u_i(x)|` over grid samples.
pub fn grad_linf(u: &VectorField) -> f64 {
    let dim = u.dim();
    (0..dim)
        .flat_map(|i| (0..dim).map(move |j| (i, j)))
        .map(|(i, j)| {
            let s = u.component(i).partial(j).physical();
            par::max_indexed(s.len(), |x| s[x].abs())
        })
        .fold(0.0, f64::max)
}

pub fn grad_uinf_split(u: &VectorField, diss: &DissipationSpec, m1: f64) -> Result<GradSplit> {
    if !(m1 >= E) {
        return Err(Error::InvalidParameter(format!("M1 = {m1} must be >= e")));
    }
    let low_term = diss.g().eval(m1) * m1.ln().sqrt() * diss.l_norm_sq(u).sqrt();
    let high_term = l_grad_norm_sq(u, diss).sqrt() / m1.sqrt();
    Ok(GradSplit {
        low_term,
        high_term,
        lhs: grad_linf(u),
    })
}
