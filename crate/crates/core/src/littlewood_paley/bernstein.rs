use crate::error::{Error, Result};
use crate::spectral::{Lp, SpectralField};

/// Coefficients below this fraction of the largest one count as zero in
/// support checks.
const SUPPORT_TOLERANCE: f64 = 1e-13;

/// Fails unless every non-negligible mode of `f` lies in the open annulus
/// `A_j = {2^{j−1} < |k| < 2^{j+1}}`.
pub fn check_annulus_support(f: &SpectralField, j: i32) -> Result<()> {
    let grid = f.grid();
    let lo = (j as f64 - 1.0).exp2();
    let hi = (j as f64 + 1.0).exp2();
    let floor = SUPPORT_TOLERANCE * f.max_abs_coeff();
    for (i, c) in f.coeffs().iter().enumerate() {
        let r = grid.wavenumber_magnitude(i);
        if c.norm() > floor && !(r > lo && r < hi) {
            return Err(Error::SupportViolation(format!(
                "mode {:?} with |k| = {r} lies outside A_{j} = ({lo}, {hi})",
                &grid.wavevector(i)[..grid.dim()]
            )));
        }
    }
    Ok(())
}

/// L^p norm with `L^∞` evaluated on a 2× zero-padded grid, which tightens
/// the grid-sample maximum for band-limited data.
fn norm(f: &SpectralField, p: Lp) -> f64 {
    match p {
        Lp::Inf => f.linf_norm_padded(),
        _ => f.lp_norm(p),
    }
}

fn lp_pair(p: f64, q: f64) -> Result<(Lp, Lp)> {
    let (lp, lq) = (Lp::try_from(p)?, Lp::try_from(q)?);
    if lp.reciprocal() < lq.reciprocal() {
        return Err(Error::InvalidParameter(format!("Bernstein needs p <= q, got p = {p}, q = {q}")));
    }
    Ok((lp, lq))
}

/// Multi-indices `γ ∈ ℕ^dim` with `|γ| = order`.
fn multi_indices(dim: usize, order: usize) -> Vec<Vec<usize>> {
    if dim == 1 {
        return vec![vec![order]];
    }
    (0..=order)
        .flat_map(|first| {
            multi_indices(dim - 1, order - first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// `sup_{|γ|=k} ‖∂^γ f‖_{L^q} / (2^{j(k + N(1/p − 1/q))} ‖f‖_{L^p})` for `f`
/// supported in `A_j`.
pub fn bernstein_ratio(f: &SpectralField, j: i32, k_order: usize, p: f64, q: f64) -> Result<f64> {
    let (lp, lq) = lp_pair(p, q)?;
    check_annulus_support(f, j)?;
    let denom = norm(f, lp);
    if denom == 0.0 {
        return Ok(0.0);
    }
    let dim = f.grid().dim();
    let sup = multi_indices(dim, k_order)
        .iter()
        .map(|gamma| {
            let mut d = f.clone();
            for (axis, &count) in gamma.iter().enumerate() {
                for _ in 0..count {
                    d = d.partial(axis);
                }
            }
            norm(&d, lq)
        })
        .fold(0.0, f64::max);
    let exponent = k_order as f64 + dim as f64 * (lp.reciprocal() - lq.reciprocal());
    Ok(sup / ((j as f64 * exponent).exp2() * denom))
}

/// Fractional variant: `‖Λ^s f‖_{L^q} / (2^{j(s + N(1/p − 1/q))} ‖f‖_{L^p})`.
pub fn bernstein_fractional_ratio(f: &SpectralField, j: i32, s: f64, p: f64, q: f64) -> Result<f64> {
    let (lp, lq) = lp_pair(p, q)?;
    check_annulus_support(f, j)?;
    let denom = norm(f, lp);
    if denom == 0.0 {
        return Ok(0.0);
    }
    let dim = f.grid().dim() as f64;
    let exponent = s + dim * (lp.reciprocal() - lq.reciprocal());
    Ok(norm(&f.fractional_derivative(s), lq) / ((j as f64 * exponent).exp2() * denom))
}
