//! Right-hand side of the incompressible MHD system
//!
//! ```text
//! ∂_t u + (u·∇)u − (b·∇)b + ∇π + ν𝓛₁²u = 0
//! ∂_t b + (u·∇)b − (b·∇)u + η𝓛₂²b = 0
//! ∇·u = ∇·b = 0
//! ```
//!
//! in spectral form. The pressure never appears: it is removed by the Leray
//! projection. Products are formed on physical samples and truncated by the
//! 2/3 rule, so for dealiased solenoidal data the discrete nonlinearity is
//! exactly skew-symmetric.

use crate::error::{Error, Result};
use crate::multiplier::DissipationSpec;
use crate::par;
use crate::spectral::{Grid, SpectralField, VectorField};

/// Velocity `u`, magnetic field `b` and the time they belong to.
#[derive(Clone, Debug, PartialEq)]
pub struct SolutionPair {
    pub u: VectorField,
    pub b: VectorField,
    pub time: f64,
}

impl SolutionPair {
    pub fn new(u: VectorField, b: VectorField, time: f64) -> Result<Self> {
        if u.grid() != b.grid() {
            return Err(Error::GridMismatch);
        }
        if !(time >= 0.0 && time.is_finite()) {
            return Err(Error::InvalidParameter(format!("time {time} must be finite and >= 0")));
        }
        Ok(SolutionPair { u, b, time })
    }

    pub fn zeros(grid: &Grid) -> Self {
        SolutionPair {
            u: VectorField::zeros(grid),
            b: VectorField::zeros(grid),
            time: 0.0,
        }
    }

    pub fn grid(&self) -> &Grid {
        self.u.grid()
    }

    /// `½(‖u‖² + ‖b‖²)`.
    pub fn energy(&self) -> f64 {
        0.5 * (self.u.l2_norm().powi(2) + self.b.l2_norm().powi(2))
    }

    /// `⟨u, b⟩`.
    pub fn cross_helicity(&self) -> f64 {
        self.u.inner(&self.b).expect("fields share a grid")
    }

    /// Larger of the relative divergence defects of `u` and `b`.
    pub fn relative_divergence(&self) -> f64 {
        self.u.relative_divergence().max(self.b.relative_divergence())
    }

    pub fn is_solenoidal(&self) -> bool {
        self.u.is_solenoidal() && self.b.is_solenoidal()
    }

    pub fn all_finite(&self) -> bool {
        self.time.is_finite() && self.u.all_finite() && self.b.all_finite()
    }

    /// Projects both fields and applies the 2/3 rule, removing the mean.
    pub fn cleaned(&self) -> Self {
        let clean = |v: &VectorField| {
            let mut w = v.dealias().leray_project();
            zero_mean(&mut w);
            w
        };
        SolutionPair {
            u: clean(&self.u),
            b: clean(&self.b),
            time: self.time,
        }
    }

    pub fn resampled(&self, target: &Grid) -> Result<Self> {
        Ok(SolutionPair {
            u: self.u.resampled(target)?,
            b: self.b.resampled(target)?,
            time: self.time,
        })
    }
}

/// Dissipation for `u` (ν, α, g₁) and `b` (η, β, g₂).
#[derive(Clone, Debug, PartialEq)]
pub struct SystemParams {
    pub diss_u: DissipationSpec,
    pub diss_b: DissipationSpec,
    pub dim: usize,
    /// When false the transport and stretching terms are dropped, leaving a
    /// purely linear system.
    pub nonlinear: bool,
}

impl SystemParams {
    pub fn new(dim: usize, diss_u: DissipationSpec, diss_b: DissipationSpec) -> Result<Self> {
        if !(dim == 2 || dim == 3) {
            return Err(Error::InvalidParameter(format!("dimension {dim} not in {{2, 3}}")));
        }
        Ok(SystemParams {
            diss_u,
            diss_b,
            dim,
            nonlinear: true,
        })
    }

    /// `ν > 0`, `η = 0` and `α ≥ 1 + N/2`: the regime in which global
    /// regularity holds under the Osgood condition on `g₁`.
    pub fn theorem_regime(&self) -> bool {
        self.diss_u.coefficient() > 0.0
            && self.diss_b.coefficient() == 0.0
            && self.diss_u.exponent() >= 1.0 + self.dim as f64 / 2.0
    }

    pub fn require_theorem_regime(&self) -> Result<()> {
        if self.theorem_regime() {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "theorem regime needs nu > 0, eta = 0, alpha >= {}; got nu = {}, eta = {}, alpha = {}",
                1.0 + self.dim as f64 / 2.0,
                self.diss_u.coefficient(),
                self.diss_b.coefficient(),
                self.diss_u.exponent()
            )))
        }
    }

    pub fn without_nonlinearity(mut self) -> Self {
        self.nonlinear = false;
        self
    }

    fn check(&self, grid: &Grid) -> Result<()> {
        if grid.dim() != self.dim {
            return Err(Error::InvalidParameter(format!(
                "parameters for N = {} applied to a {}-dimensional state",
                self.dim,
                grid.dim()
            )));
        }
        Ok(())
    }
}

fn zero_mean(v: &mut VectorField) {
    for c in v.components_mut() {
        c.coeffs_mut()[0] = num_complex::Complex64::new(0.0, 0.0);
    }
}

/// Grid samples indexed `[component][point]`.
type Samples = Vec<Vec<f64>>;

/// Physical samples of every component of `v` and of every `∂_j v_i`
/// (`grad[i][j]`).
fn physical_with_gradient(v: &VectorField) -> Result<(Samples, Vec<Samples>)> {
    let dim = v.dim();
    let mut fields: Vec<SpectralField> = v.components().to_vec();
    for i in 0..dim {
        for j in 0..dim {
            fields.push(v.component(i).partial(j));
        }
    }
    let mut samples = Vec::with_capacity(fields.len());
    for pair in fields.chunks(2) {
        match pair {
            [a, b] => {
                let (x, y) = SpectralField::physical_pair(a, b)?;
                samples.push(x);
                samples.push(y);
            }
            [a] => samples.push(a.physical()),
            _ => unreachable!(),
        }
    }
    let grad_flat = samples.split_off(dim);
    let grad = grad_flat
        .chunks(dim)
        .map(|row| row.to_vec())
        .collect();
    Ok((samples, grad))
}

/// `(Leray(−(u·∇)u + (b·∇)b), Leray(−(u·∇)b + (b·∇)u))`, dealiased, zero mean.
pub fn nonlinear_tendency(state: &SolutionPair) -> Result<(VectorField, VectorField)> {
    let grid = state.grid().clone();
    if state.b.grid() != &grid {
        return Err(Error::GridMismatch);
    }
    if grid.points_per_axis() < 8 {
        return Err(Error::InvalidGrid(format!(
            "{} points per axis is too few to dealias",
            grid.points_per_axis()
        )));
    }
    let dim = grid.dim();
    let len = grid.len();
    let (up, gu) = physical_with_gradient(&state.u)?;
    let (bp, gb) = physical_with_gradient(&state.b)?;

    let mut du_phys = Vec::with_capacity(dim);
    let mut db_phys = Vec::with_capacity(dim);
    for i in 0..dim {
        let mut du = vec![0.0; len];
        let mut db = vec![0.0; len];
        par::map_indexed(&mut du, |x, _| {
            (0..dim)
                .map(|j| bp[j][x] * gb[i][j][x] - up[j][x] * gu[i][j][x])
                .sum()
        });
        par::map_indexed(&mut db, |x, _| {
            (0..dim)
                .map(|j| bp[j][x] * gu[i][j][x] - up[j][x] * gb[i][j][x])
                .sum()
        });
        du_phys.push(du);
        db_phys.push(db);
    }

    let mut du_spec = Vec::with_capacity(dim);
    let mut db_spec = Vec::with_capacity(dim);
    for (du, db) in du_phys.iter().zip(&db_phys) {
        let (a, b) = SpectralField::forward_transform_pair(&grid, du, db)?;
        du_spec.push(a);
        db_spec.push(b);
    }
    let finish = |comps: Vec<SpectralField>| -> Result<VectorField> {
        let mut v = VectorField::new(comps)?;
        for c in v.components_mut() {
            c.dealias_in_place();
        }
        zero_mean(&mut v);
        v.leray_project_in_place();
        Ok(v)
    };
    Ok((finish(du_spec)?, finish(db_spec)?))
}

/// Nonlinear tendency (if enabled) minus `(ν𝓛₁²u, η𝓛₂²b)`.
pub fn full_tendency(state: &SolutionPair, params: &SystemParams) -> Result<(VectorField, VectorField)> {
    params.check(state.grid())?;
    let (du, db) = if params.nonlinear {
        nonlinear_tendency(state)?
    } else {
        (VectorField::zeros(state.grid()), VectorField::zeros(state.grid()))
    };
    let du = du.axpy(-1.0, &params.diss_u.apply_dissipation(&state.u))?;
    let db = if params.diss_b.coefficient() == 0.0 {
        db
    } else {
        db.axpy(-1.0, &params.diss_b.apply_dissipation(&state.b))?
    };
    Ok((du, db))
}

/// `(⟨du_nl, u⟩ + ⟨db_nl, b⟩, ν‖𝓛₁u‖² + η‖𝓛₂b‖²)`. The first entry vanishes
/// up to round-off for dealiased solenoidal states.
pub fn energy_flux_identity(state: &SolutionPair, params: &SystemParams) -> Result<(f64, f64)> {
    params.check(state.grid())?;
    let flux = if params.nonlinear {
        let (du, db) = nonlinear_tendency(state)?;
        du.inner(&state.u)? + db.inner(&state.b)?
    } else {
        0.0
    };
    let rate = params.diss_u.coefficient() * params.diss_u.l_norm_sq(&state.u)
        + params.diss_b.coefficient() * params.diss_b.l_norm_sq(&state.b);
    Ok((flux, rate))
}
