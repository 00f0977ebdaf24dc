use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectral::{Grid, Lp, SpectralField};

/// Smooth non-increasing cutoff: 1 on `[0, 3/4]`, 0 on `[1, ∞)`, C^∞ between.
pub fn chi(r: f64) -> f64 {
    const LO: f64 = 0.75;
    const HI: f64 = 1.0;
    if r <= LO {
        1.0
    } else if r >= HI {
        0.0
    } else {
        let t = (r - LO) / (HI - LO);
        let a = flat(1.0 - t);
        a / (a + flat(t))
    }
}

fn flat(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp()
    }
}

/// `Φ̂_0(r) = χ(r/2) − χ(r)`: supported in `(3/4, 2)`, equal to 1 on `[1, 3/2]`.
pub fn phi0(r: f64) -> f64 {
    chi(0.5 * r) - chi(r)
}

/// `Φ̂_j(r) = Φ̂_0(2^{−j} r)`.
pub fn phi(j: i32, r: f64) -> f64 {
    phi0(r * (-j as f64).exp2())
}

/// `Ψ̂ = χ`, the `j = −1` block.
pub fn psi(r: f64) -> f64 {
    chi(r)
}

/// Inhomogeneous Littlewood-Paley partition sampled on a grid. Blocks run
/// over `j = −1 … j_max`; block `−1` is `Ψ̂` and block `j ≥ 0` is `Φ̂_j`.
///
/// `Ψ̂ + Σ_{j ≤ J} Φ̂_j = χ(2^{−J−1} r)` telescopes, so the partition sums to
/// one wherever `r ≤ (3/4)·2^{j_max+1}`. `j_max` is the smallest index for
/// which that covers every wave vector of the grid.
#[derive(Clone, Debug)]
pub struct DyadicPartition {
    grid: Grid,
    j_max: i32,
    /// `profiles[j + 1][flat index]`.
    profiles: Vec<Vec<f64>>,
}

impl DyadicPartition {
    pub fn new(grid: &Grid) -> Self {
        let r_max = (0..grid.len())
            .map(|i| grid.wavenumber_magnitude(i))
            .fold(0.0, f64::max);
        let mut j_max = 0;
        while 0.75 * (2.0_f64).powi(j_max + 1) < r_max {
            j_max += 1;
        }
        let radii: Vec<f64> = (0..grid.len()).map(|i| grid.wavenumber_magnitude(i)).collect();
        let profiles = (-1..=j_max)
            .map(|j| {
                radii
                    .iter()
                    .map(|&r| if j < 0 { psi(r) } else { phi(j, r) })
                    .collect()
            })
            .collect();
        DyadicPartition {
            grid: grid.clone(),
            j_max,
            profiles,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn j_min(&self) -> i32 {
        -1
    }

    pub fn j_max(&self) -> i32 {
        self.j_max
    }

    pub fn indices(&self) -> impl Iterator<Item = i32> {
        -1..=self.j_max
    }

    /// Sampled cutoff of block `j` by flat index; `None` outside `-1..=j_max`.
    pub fn profile(&self, j: i32) -> Option<&[f64]> {
        if j < -1 || j > self.j_max {
            return None;
        }
        Some(&self.profiles[(j + 1) as usize])
    }

    fn check(&self, f: &SpectralField) -> Result<()> {
        if f.grid() != &self.grid {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }

    /// `Δ_j f` for one block (zero for `j < −1` or `j > j_max`).
    pub fn block(&self, f: &SpectralField, j: i32) -> Result<SpectralField> {
        self.check(f)?;
        Ok(match self.profile(j) {
            Some(p) => f.apply_symbol(|i| p[i]),
            None => SpectralField::zeros(&self.grid),
        })
    }

    /// `[Δ_{−1} f, Δ_0 f, …, Δ_{j_max} f]`.
    pub fn dyadic_blocks(&self, f: &SpectralField) -> Result<Vec<SpectralField>> {
        self.check(f)?;
        Ok(self.profiles.iter().map(|p| f.apply_symbol(|i| p[i])).collect())
    }
}

/// Lebesgue exponent or sequence exponent drawn from `{1, 2, ∞}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BesovIndex {
    pub s: f64,
    pub p: f64,
    pub q: f64,
}

impl BesovIndex {
    pub fn new(s: f64, p: f64, q: f64) -> Result<Self> {
        let idx = BesovIndex { s, p, q };
        idx.exponents()?;
        if !s.is_finite() {
            return Err(Error::InvalidParameter(format!("Besov smoothness {s} must be finite")));
        }
        Ok(idx)
    }

    fn exponents(&self) -> Result<(Lp, Lp)> {
        Ok((Lp::try_from(self.p)?, Lp::try_from(self.q)?))
    }
}

/// `‖f‖_{B^s_{p,q}} = ‖(2^{js}‖Δ_j f‖_{L^p})_j‖_{ℓ^q}`, inhomogeneous,
/// with `L^∞` taken over grid samples.
pub fn besov_norm(f: &SpectralField, idx: BesovIndex, part: &DyadicPartition) -> Result<f64> {
    let (p, q) = idx.exponents()?;
    let terms: Vec<f64> = part
        .dyadic_blocks(f)?
        .iter()
        .zip(part.indices())
        .map(|(b, j)| (j as f64 * idx.s).exp2() * b.lp_norm(p))
        .collect();
    Ok(match q {
        Lp::L1 => terms.iter().sum(),
        Lp::L2 => terms.iter().map(|t| t * t).sum::<f64>().sqrt(),
        Lp::Inf => terms.iter().copied().fold(0.0, f64::max),
    })
}
