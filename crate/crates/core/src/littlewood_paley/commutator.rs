use crate::error::{Error, Result};
use crate::par;
use crate::spectral::{Lp, SpectralField};

/// Exponents `(p, p₁, p₂, p₃, p₄)` of the commutator estimate
/// `‖Λ^s(fg) − fΛ^s g‖_p ≲ ‖∇f‖_{p₁}‖Λ^{s−1}g‖_{p₂} + ‖Λ^s f‖_{p₃}‖g‖_{p₄}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CommutatorExponents {
    pub p: f64,
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub p4: f64,
}

impl CommutatorExponents {
    pub const L2_LINF: CommutatorExponents = CommutatorExponents {
        p: 2.0,
        p1: f64::INFINITY,
        p2: 2.0,
        p3: 2.0,
        p4: f64::INFINITY,
    };

    /// Resolves the exponents, requiring values in `{1, 2, ∞}`,
    /// `1/p = 1/p₁ + 1/p₂ = 1/p₃ + 1/p₄` and `p, p₂, p₃ ∈ (1, ∞)`.
    fn resolve(&self) -> Result<[Lp; 5]> {
        let resolved = [self.p, self.p1, self.p2, self.p3, self.p4]
            .into_iter()
            .map(Lp::try_from)
            .collect::<Result<Vec<_>>>()
            .map_err(|_| Error::IncompatibleExponents(format!("{self:?}: exponents must be 1, 2 or infinity")))?;
        let [p, p1, p2, p3, p4] = resolved[..] else { unreachable!() };
        let r = |l: Lp| l.reciprocal();
        if r(p) != r(p1) + r(p2) || r(p) != r(p3) + r(p4) {
            return Err(Error::IncompatibleExponents(format!("{self:?} violates Hoelder scaling")));
        }
        if [p, p2, p3].iter().any(|&l| l != Lp::L2) {
            return Err(Error::IncompatibleExponents(format!(
                "{self:?}: p, p2 and p3 must lie strictly between 1 and infinity"
            )));
        }
        Ok([p, p1, p2, p3, p4])
    }
}

fn norm_of_samples(samples: &[f64], p: Lp, cell_volume: f64) -> f64 {
    match p {
        Lp::L1 => cell_volume * par::sum_indexed(samples.len(), |i| samples[i].abs()),
        Lp::L2 => (cell_volume * par::sum_indexed(samples.len(), |i| samples[i] * samples[i])).sqrt(),
        Lp::Inf => par::max_indexed(samples.len(), |i| samples[i].abs()),
    }
}

/// `LHS / RHS` of the commutator estimate (constant omitted). Products are
/// evaluated on a 2× refined grid where they are exact for dealiased input;
/// all norms are taken there as well. Returns 0 when `f` is constant.
pub fn commutator_ratio(
    f: &SpectralField,
    g: &SpectralField,
    s: f64,
    exponents: CommutatorExponents,
) -> Result<f64> {
    let [p, p1, p2, p3, p4] = exponents.resolve()?;
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::InvalidParameter(format!("commutator order s = {s} must be > 0")));
    }
    if f.grid() != g.grid() {
        return Err(Error::GridMismatch);
    }
    let (f, g) = (&dealiased(f)?, &dealiased(g)?);
    if f.coeffs().iter().skip(1).all(|c| c.norm() == 0.0) {
        return Ok(0.0);
    }
    let fine = f.grid().refined(2)?;
    let vol = fine.cell_volume();
    let f2 = f.resampled(&fine)?;
    let g2 = g.resampled(&fine)?;

    let fs = f2.physical();
    let gs = g2.physical();
    let lsg = g2.fractional_derivative(s).physical();
    let fg: Vec<f64> = fs.iter().zip(&gs).map(|(a, b)| a * b).collect();
    let lfg = SpectralField::forward_transform(&fine, &fg)?.fractional_derivative(s).physical();
    let comm: Vec<f64> = (0..fine.len()).map(|i| lfg[i] - fs[i] * lsg[i]).collect();
    let lhs = norm_of_samples(&comm, p, vol);

    let grad: Vec<Vec<f64>> = (0..fine.dim()).map(|a| f2.partial(a).physical()).collect();
    let grad_mag: Vec<f64> = (0..fine.len())
        .map(|i| grad.iter().map(|c| c[i] * c[i]).sum::<f64>().sqrt())
        .collect();
    let rhs = norm_of_samples(&grad_mag, p1, vol)
        * norm_of_samples(&g2.fractional_derivative(s - 1.0).physical(), p2, vol)
        + norm_of_samples(&f2.fractional_derivative(s).physical(), p3, vol) * norm_of_samples(&gs, p4, vol);
    Ok(if rhs == 0.0 { 0.0 } else { lhs / rhs })
}

/// Truncates round-off outside the retained band; rejects real content there.
fn dealiased(f: &SpectralField) -> Result<SpectralField> {
    let grid = f.grid();
    let c = f.coeffs();
    let outside = par::max_indexed(c.len(), |i| if grid.is_retained(i) { 0.0 } else { c[i].norm() });
    if outside > 1e-13 * f.max_abs_coeff() {
        return Err(Error::SupportViolation(format!(
            "commutator inputs must be dealiased (content {outside:.3e} beyond the 2/3 band)"
        )));
    }
    Ok(f.dealias())
}
