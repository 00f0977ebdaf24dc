use num_complex::Complex64;

use super::fft;
use super::grid::Grid;
use crate::error::{Error, Result};
use crate::par;

/// Relative tolerance for accepting a spectrum as the transform of real data.
const CONJUGATE_TOLERANCE: f64 = 1e-10;

/// Supported Lebesgue exponents.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lp {
    L1,
    L2,
    Inf,
}

impl Lp {
    /// `1/p`, with `1/∞ = 0`.
    pub fn reciprocal(self) -> f64 {
        match self {
            Lp::L1 => 1.0,
            Lp::L2 => 0.5,
            Lp::Inf => 0.0,
        }
    }
}

impl TryFrom<f64> for Lp {
    type Error = Error;

    fn try_from(p: f64) -> Result<Self> {
        if p == 1.0 {
            Ok(Lp::L1)
        } else if p == 2.0 {
            Ok(Lp::L2)
        } else if p == f64::INFINITY {
            Ok(Lp::Inf)
        } else {
            Err(Error::UnsupportedNorm(p))
        }
    }
}

/// A scalar field on a periodic grid, held as Fourier-series coefficients.
///
/// The forward transform divides by the number of grid points, so
/// `coeff(0)` is the mean and `f(x) = Σ_k f̂(k) e^{i k·x}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(grid: &Grid) -> Self {
        SpectralField {
            grid: grid.clone(),
            coeffs: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn from_coeffs(grid: &Grid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::ShapeMismatch {
                expected: grid.len(),
                actual: coeffs.len(),
            });
        }
        Ok(SpectralField {
            grid: grid.clone(),
            coeffs,
        })
    }

    pub fn forward_transform(grid: &Grid, samples: &[f64]) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::ShapeMismatch {
                expected: grid.len(),
                actual: samples.len(),
            });
        }
        let mut coeffs: Vec<Complex64> = samples.iter().map(|&s| Complex64::new(s, 0.0)).collect();
        fft::transform(grid, &mut coeffs, false);
        let scale = 1.0 / grid.len() as f64;
        par::map_indexed(&mut coeffs, |_, c| c * scale);
        Ok(SpectralField {
            grid: grid.clone(),
            coeffs,
        })
    }

    /// Samples `f` at the grid points and transforms.
    pub fn from_fn(grid: &Grid, f: impl Fn([f64; 3]) -> f64) -> Self {
        let samples: Vec<f64> = (0..grid.len()).map(|i| f(grid.coordinates(i))).collect();
        Self::forward_transform(grid, &samples).expect("sample count matches grid")
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient at wave vector `k`, zero if `k` is not representable.
    pub fn coeff(&self, k: &[i64]) -> Complex64 {
        self.grid
            .index_of(k)
            .map_or(Complex64::new(0.0, 0.0), |i| self.coeffs[i])
    }

    pub fn set_coeff(&mut self, k: &[i64], value: Complex64) -> Result<()> {
        let i = self
            .grid
            .index_of(k)
            .ok_or_else(|| Error::InvalidParameter(format!("wave vector {k:?} not on grid")))?;
        self.coeffs[i] = value;
        Ok(())
    }

    /// `max_k |f̂(k) - conj(f̂(-k))|`.
    pub fn conjugate_symmetry_defect(&self) -> f64 {
        let g = &self.grid;
        let c = &self.coeffs;
        par::max_indexed(c.len(), |i| (c[i] - c[g.conjugate_index(i)].conj()).norm())
    }

    pub fn max_abs_coeff(&self) -> f64 {
        let c = &self.coeffs;
        par::max_indexed(c.len(), |i| c[i].norm())
    }

    /// Physical samples; rejects spectra that do not represent real data.
    pub fn inverse_transform(&self) -> Result<Vec<f64>> {
        let defect = self.conjugate_symmetry_defect();
        if defect > CONJUGATE_TOLERANCE * self.max_abs_coeff().max(f64::MIN_POSITIVE) {
            return Err(Error::NotConjugateSymmetric { defect });
        }
        Ok(self.physical())
    }

    /// Physical samples without the symmetry check (imaginary parts dropped).
    pub fn physical(&self) -> Vec<f64> {
        let mut data = self.coeffs.clone();
        fft::transform(&self.grid, &mut data, true);
        data.into_iter().map(|c| c.re).collect()
    }

    /// Physical samples of two real fields from a single complex transform.
    pub fn physical_pair(a: &SpectralField, b: &SpectralField) -> Result<(Vec<f64>, Vec<f64>)> {
        if a.grid != b.grid {
            return Err(Error::GridMismatch);
        }
        let mut data: Vec<Complex64> = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| x + Complex64::i() * y)
            .collect();
        fft::transform(&a.grid, &mut data, true);
        Ok(data.into_iter().map(|z| (z.re, z.im)).unzip())
    }

    /// Forward transforms of two real sample arrays from a single complex transform.
    pub fn forward_transform_pair(grid: &Grid, a: &[f64], b: &[f64]) -> Result<(Self, Self)> {
        for s in [a, b] {
            if s.len() != grid.len() {
                return Err(Error::ShapeMismatch {
                    expected: grid.len(),
                    actual: s.len(),
                });
            }
        }
        let mut z: Vec<Complex64> = a.iter().zip(b).map(|(&x, &y)| Complex64::new(x, y)).collect();
        fft::transform(grid, &mut z, false);
        let scale = 0.5 / grid.len() as f64;
        let mut fa = vec![Complex64::new(0.0, 0.0); grid.len()];
        let mut fb = fa.clone();
        par::map_indexed(&mut fa, |i, _| (z[i] + z[grid.conjugate_index(i)].conj()) * scale);
        par::map_indexed(&mut fb, |i, _| {
            let d = (z[i] - z[grid.conjugate_index(i)].conj()) * scale;
            Complex64::new(d.im, -d.re)
        });
        Ok((
            SpectralField { grid: grid.clone(), coeffs: fa },
            SpectralField { grid: grid.clone(), coeffs: fb },
        ))
    }

    /// Multiplies every coefficient by a real symbol of its flat index.
    pub fn apply_symbol(&self, symbol: impl Fn(usize) -> f64 + Send + Sync) -> Self {
        let mut out = self.clone();
        par::map_indexed(&mut out.coeffs, |i, c| c * symbol(i));
        out
    }

    /// `Λ^s f`: multiplier `|k|^s`, zero mode sent to 0.
    pub fn fractional_derivative(&self, s: f64) -> Self {
        let g = self.grid.clone();
        self.apply_symbol(move |i| {
            let k2 = g.wavenumber_sq(i);
            if k2 == 0.0 {
                0.0
            } else {
                k2.powf(0.5 * s)
            }
        })
    }

    /// `∂f/∂x_axis`.
    pub fn partial(&self, axis: usize) -> Self {
        let mut out = self.clone();
        let g = &self.grid;
        par::map_indexed(&mut out.coeffs, |i, c| {
            let k = g.derivative_wavevector(i)[axis];
            Complex64::new(-k * c.im, k * c.re)
        });
        out
    }

    pub fn gradient(&self) -> VectorField {
        VectorField {
            components: (0..self.grid.dim()).map(|a| self.partial(a)).collect(),
        }
    }

    /// 2/3-rule truncation.
    pub fn dealias(&self) -> Self {
        let mut out = self.clone();
        out.dealias_in_place();
        out
    }

    pub fn dealias_in_place(&mut self) {
        let g = &self.grid;
        par::map_indexed(&mut self.coeffs, |i, c| {
            if g.is_retained(i) {
                c
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
    }

    /// True if every mode outside the retained band is exactly zero.
    pub fn is_dealiased(&self) -> bool {
        let g = &self.grid;
        let c = &self.coeffs;
        par::max_indexed(c.len(), |i| if g.is_retained(i) { 0.0 } else { c[i].norm() }) == 0.0
    }

    /// `Σ_k |f̂(k)|²`.
    pub fn spectral_energy(&self) -> f64 {
        let c = &self.coeffs;
        par::sum_indexed(c.len(), |i| c[i].norm_sqr())
    }

    /// L² (spectral, via Parseval), L¹ and L^∞ (physical samples).
    pub fn lp_norm(&self, p: Lp) -> f64 {
        match p {
            Lp::L2 => (self.grid.domain_volume() * self.spectral_energy()).sqrt(),
            Lp::L1 => {
                let s = self.physical();
                self.grid.cell_volume() * par::sum_indexed(s.len(), |i| s[i].abs())
            }
            Lp::Inf => {
                let s = self.physical();
                par::max_indexed(s.len(), |i| s[i].abs())
            }
        }
    }

    /// Grid-sample L² norm, used to cross-check Parseval.
    pub fn l2_norm_physical(&self) -> f64 {
        let s = self.physical();
        (self.grid.cell_volume() * par::sum_indexed(s.len(), |i| s[i] * s[i])).sqrt()
    }

    /// Sup norm sampled on a grid refined twice per axis. The plain grid
    /// maximum underestimates the true supremum of the trigonometric
    /// polynomial; oversampling tightens it.
    pub fn linf_norm_padded(&self) -> f64 {
        let fine = self.grid.refined(2).expect("refined grid is valid");
        self.resampled(&fine)
            .expect("same dimension")
            .lp_norm(Lp::Inf)
    }

    /// Homogeneous Sobolev norm `‖Λ^s f‖_{L²}` (zero mode excluded).
    pub fn hs_norm(&self, s: f64) -> f64 {
        let g = &self.grid;
        let c = &self.coeffs;
        let sum = par::sum_indexed(c.len(), |i| {
            let k2 = g.wavenumber_sq(i);
            if k2 == 0.0 {
                0.0
            } else {
                k2.powf(s) * c[i].norm_sqr()
            }
        });
        (g.domain_volume() * sum).sqrt()
    }

    /// Real L² inner product `∫ f h dx`.
    pub fn inner(&self, other: &SpectralField) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let (a, b) = (&self.coeffs, &other.coeffs);
        let s = par::sum_indexed(a.len(), |i| (a[i] * b[i].conj()).re);
        Ok(self.grid.domain_volume() * s)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        par::map_indexed(&mut out.coeffs, |_, c| c * factor);
        out
    }

    /// `self + factor * other`.
    pub fn axpy(&self, factor: f64, other: &SpectralField) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let mut out = self.clone();
        let o = &other.coeffs;
        par::map_indexed(&mut out.coeffs, |i, c| c + o[i] * factor);
        Ok(out)
    }

    /// Re-expresses the field on another grid of the same dimension: zero
    /// padding when refining (Nyquist content split evenly between `±n/2`),
    /// truncation to `|k_j| < m/2` when coarsening.
    pub fn resampled(&self, target: &Grid) -> Result<Self> {
        let src = &self.grid;
        if src.dim() != target.dim() {
            return Err(Error::GridMismatch);
        }
        if src == target {
            return Ok(self.clone());
        }
        let dim = src.dim();
        let n = src.points_per_axis() as i64;
        let mut out = SpectralField::zeros(target);
        if target.points_per_axis() > src.points_per_axis() {
            for (i, &c) in self.coeffs.iter().enumerate() {
                if c == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let k = src.wavevector(i);
                let nyq: Vec<usize> = (0..dim).filter(|&d| k[d] == -n / 2).collect();
                let weight = 0.5f64.powi(nyq.len() as i32);
                for mask in 0..(1usize << nyq.len()) {
                    let mut kk = k;
                    for (bit, &d) in nyq.iter().enumerate() {
                        if mask & (1 << bit) != 0 {
                            kk[d] = n / 2;
                        }
                    }
                    let j = target.index_of(&kk[..dim]).expect("fits on finer grid");
                    out.coeffs[j] += c * weight;
                }
            }
        } else {
            let m = target.points_per_axis() as i64;
            for (i, &c) in self.coeffs.iter().enumerate() {
                let k = src.wavevector(i);
                if k[..dim].iter().all(|&kj| kj.abs() < m / 2) {
                    let j = target.index_of(&k[..dim]).expect("fits on coarser grid");
                    out.coeffs[j] = c;
                }
            }
        }
        Ok(out)
    }
}

/// `N` scalar fields on a shared grid.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    components: Vec<SpectralField>,
}

impl VectorField {
    pub fn new(components: Vec<SpectralField>) -> Result<Self> {
        let Some(first) = components.first() else {
            return Err(Error::InvalidParameter("vector field needs components".into()));
        };
        if components.len() != first.grid().dim() {
            return Err(Error::InvalidParameter(format!(
                "{} components on a {}-dimensional grid",
                components.len(),
                first.grid().dim()
            )));
        }
        if components.iter().any(|c| c.grid() != first.grid()) {
            return Err(Error::GridMismatch);
        }
        Ok(VectorField { components })
    }

    pub fn zeros(grid: &Grid) -> Self {
        VectorField {
            components: (0..grid.dim()).map(|_| SpectralField::zeros(grid)).collect(),
        }
    }

    /// Builds each component from physical samples of `f(x)[j]`.
    pub fn from_fn(grid: &Grid, f: impl Fn([f64; 3]) -> [f64; 3]) -> Self {
        VectorField {
            components: (0..grid.dim())
                .map(|j| SpectralField::from_fn(grid, |x| f(x)[j]))
                .collect(),
        }
    }

    pub fn grid(&self) -> &Grid {
        self.components[0].grid()
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[SpectralField] {
        &self.components
    }

    pub fn components_mut(&mut self) -> &mut [SpectralField] {
        &mut self.components
    }

    pub fn component(&self, j: usize) -> &SpectralField {
        &self.components[j]
    }

    pub fn into_components(self) -> Vec<SpectralField> {
        self.components
    }

    pub fn map(&self, f: impl Fn(&SpectralField) -> SpectralField) -> Self {
        VectorField {
            components: self.components.iter().map(f).collect(),
        }
    }

    pub fn divergence(&self) -> SpectralField {
        let g = self.grid().clone();
        let mut out = SpectralField::zeros(&g);
        let comps = &self.components;
        par::map_indexed(&mut out.coeffs, |i, _| {
            let k = g.derivative_wavevector(i);
            let mut s = Complex64::new(0.0, 0.0);
            for (d, c) in comps.iter().enumerate() {
                s += c.coeffs[i] * k[d];
            }
            Complex64::new(-s.im, s.re)
        });
        out
    }

    /// `max_k |k·v̂(k)|`.
    pub fn divergence_defect(&self) -> f64 {
        let g = self.grid();
        let comps = &self.components;
        par::max_indexed(g.len(), |i| {
            let k = g.derivative_wavevector(i);
            let mut s = Complex64::new(0.0, 0.0);
            for (d, c) in comps.iter().enumerate() {
                s += c.coeffs[i] * k[d];
            }
            s.norm()
        })
    }

    /// Divergence defect relative to `max(1, ‖v‖_{L²})`.
    pub fn relative_divergence(&self) -> f64 {
        self.divergence_defect() / self.l2_norm().max(1.0)
    }

    pub fn is_solenoidal(&self) -> bool {
        self.relative_divergence() <= 1e-12
    }

    /// Orthogonal projection onto divergence-free fields.
    pub fn leray_project(&self) -> Self {
        let mut out = self.clone();
        out.leray_project_in_place();
        out
    }

    pub fn leray_project_in_place(&mut self) {
        let g = self.grid().clone();
        let dim = g.dim();
        let len = g.len();
        let mut cols: Vec<Vec<Complex64>> = self
            .components
            .iter_mut()
            .map(|c| std::mem::take(&mut c.coeffs))
            .collect();
        // Interleave so one pass can update all components of a mode.
        let mut packed = vec![Complex64::new(0.0, 0.0); len * dim];
        for (d, col) in cols.iter().enumerate() {
            for i in 0..len {
                packed[i * dim + d] = col[i];
            }
        }
        par::for_each_chunk_mut(&mut packed, dim, |i, v| {
            let k = g.derivative_wavevector(i);
            let k2: f64 = k[..dim].iter().map(|x| x * x).sum();
            if k2 == 0.0 {
                return;
            }
            let mut kv = Complex64::new(0.0, 0.0);
            for d in 0..dim {
                kv += v[d] * k[d];
            }
            let f = kv / k2;
            for d in 0..dim {
                v[d] -= f * k[d];
            }
        });
        for (d, col) in cols.iter_mut().enumerate() {
            for i in 0..len {
                col[i] = packed[i * dim + d];
            }
        }
        for (c, col) in self.components.iter_mut().zip(cols) {
            c.coeffs = col;
        }
    }

    pub fn dealias(&self) -> Self {
        self.map(SpectralField::dealias)
    }

    pub fn is_dealiased(&self) -> bool {
        self.components.iter().all(SpectralField::is_dealiased)
    }

    /// `sqrt(Σ_j ‖v_j‖²_{L²})`.
    pub fn l2_norm(&self) -> f64 {
        let e: f64 = self.components.iter().map(SpectralField::spectral_energy).sum();
        (self.grid().domain_volume() * e).sqrt()
    }

    pub fn hs_norm(&self, s: f64) -> f64 {
        self.components
            .iter()
            .map(|c| c.hs_norm(s).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// `‖∇v‖²_{L²} = Σ_{i,j} ‖∂_i v_j‖²`.
    pub fn gradient_sq_norm(&self) -> f64 {
        let g = self.grid();
        let comps = &self.components;
        let s = par::sum_indexed(g.len(), |i| {
            let k = g.derivative_wavevector(i);
            let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
            k2 * comps.iter().map(|c| c.coeffs[i].norm_sqr()).sum::<f64>()
        });
        g.domain_volume() * s
    }

    pub fn inner(&self, other: &VectorField) -> Result<f64> {
        if self.grid() != other.grid() {
            return Err(Error::GridMismatch);
        }
        self.components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.inner(b))
            .sum()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        self.map(|c| c.scaled(factor))
    }

    pub fn axpy(&self, factor: f64, other: &VectorField) -> Result<Self> {
        if self.grid() != other.grid() {
            return Err(Error::GridMismatch);
        }
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.axpy(factor, b))
            .collect::<Result<_>>()?;
        Ok(VectorField { components })
    }

    pub fn physical(&self) -> Vec<Vec<f64>> {
        self.components.iter().map(SpectralField::physical).collect()
    }

    /// `max_x |v(x)|` with the Euclidean magnitude, on grid samples.
    pub fn max_magnitude(&self) -> f64 {
        let phys = self.physical();
        par::max_indexed(phys[0].len(), |i| {
            phys.iter().map(|c| c[i] * c[i]).sum::<f64>().sqrt()
        })
    }

    pub fn all_finite(&self) -> bool {
        self.components
            .iter()
            .all(|c| c.coeffs.iter().all(|z| z.re.is_finite() && z.im.is_finite()))
    }

    pub fn resampled(&self, target: &Grid) -> Result<Self> {
        let components = self
            .components
            .iter()
            .map(|c| c.resampled(target))
            .collect::<Result<_>>()?;
        Ok(VectorField { components })
    }
}
