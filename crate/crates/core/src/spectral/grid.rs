use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

pub(crate) struct Plans {
    pub(crate) forward: Arc<dyn Fft<f64>>,
    pub(crate) inverse: Arc<dyn Fft<f64>>,
}

/// Uniform periodic grid on the torus `[0, 2π)^dim`.
///
/// Coefficient arrays are stored row-major over the axes, each axis in FFT
/// order: index `i` carries wave number `i` for `i < n/2` and `i - n`
/// otherwise, so the wave numbers per axis are `-n/2 .. n/2 - 1`.
#[derive(Clone)]
pub struct Grid {
    dim: usize,
    n: usize,
    shift: u32,
    plans: Arc<Plans>,
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.n == other.n
    }
}

impl Eq for Grid {}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("dim", &self.dim)
            .field("points_per_axis", &self.n)
            .finish()
    }
}

impl Grid {
    pub fn new(dim: usize, points_per_axis: usize) -> Result<Self> {
        if !(2..=3).contains(&dim) {
            return Err(Error::InvalidGrid(format!("dimension {dim} not in {{2, 3}}")));
        }
        if points_per_axis < 8 || !points_per_axis.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "points per axis {points_per_axis} must be a power of two >= 8"
            )));
        }
        let mut planner = FftPlanner::new();
        let plans = Plans {
            forward: planner.plan_fft_forward(points_per_axis),
            inverse: planner.plan_fft_inverse(points_per_axis),
        };
        Ok(Grid {
            dim,
            n: points_per_axis,
            shift: points_per_axis.trailing_zeros(),
            plans: Arc::new(plans),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points_per_axis(&self) -> usize {
        self.n
    }

    /// Total number of grid points (and of Fourier coefficients).
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn box_length(&self) -> f64 {
        2.0 * PI
    }

    /// `(2π)^dim`.
    pub fn domain_volume(&self) -> f64 {
        (2.0 * PI).powi(self.dim as i32)
    }

    pub fn cell_volume(&self) -> f64 {
        self.domain_volume() / self.len() as f64
    }

    pub(crate) fn plans(&self) -> &Plans {
        &self.plans
    }

    /// Per-axis array indices of a flat index. Unused trailing axes are 0.
    #[inline]
    pub fn axis_indices(&self, idx: usize) -> [usize; 3] {
        let mask = self.n - 1;
        match self.dim {
            2 => [idx >> self.shift, idx & mask, 0],
            _ => [
                idx >> (2 * self.shift),
                (idx >> self.shift) & mask,
                idx & mask,
            ],
        }
    }

    #[inline]
    pub fn flat_index(&self, axes: [usize; 3]) -> usize {
        match self.dim {
            2 => (axes[0] << self.shift) | axes[1],
            _ => (axes[0] << (2 * self.shift)) | (axes[1] << self.shift) | axes[2],
        }
    }

    #[inline]
    pub fn wavenumber_of(&self, i: usize) -> i64 {
        if i < self.n / 2 {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    /// Integer wave vector of a flat index (unused axes are 0).
    #[inline]
    pub fn wavevector(&self, idx: usize) -> [i64; 3] {
        let a = self.axis_indices(idx);
        let mut k = [0i64; 3];
        for d in 0..self.dim {
            k[d] = self.wavenumber_of(a[d]);
        }
        k
    }

    /// Wave vector used by odd derivatives: Nyquist components are zeroed so
    /// derivatives of real fields stay real.
    #[inline]
    pub fn derivative_wavevector(&self, idx: usize) -> [f64; 3] {
        let a = self.axis_indices(idx);
        let mut k = [0.0; 3];
        for d in 0..self.dim {
            if a[d] != self.n / 2 {
                k[d] = self.wavenumber_of(a[d]) as f64;
            }
        }
        k
    }

    #[inline]
    pub fn wavenumber_sq(&self, idx: usize) -> f64 {
        let k = self.wavevector(idx);
        (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64
    }

    #[inline]
    pub fn wavenumber_magnitude(&self, idx: usize) -> f64 {
        self.wavenumber_sq(idx).sqrt()
    }

    /// Flat index of the wave vector `-k`.
    #[inline]
    pub fn conjugate_index(&self, idx: usize) -> usize {
        let a = self.axis_indices(idx);
        let mut c = [0usize; 3];
        for d in 0..self.dim {
            c[d] = (self.n - a[d]) & (self.n - 1);
        }
        self.flat_index(c)
    }

    /// Flat index of wave vector `k`, if representable on this grid.
    pub fn index_of(&self, k: &[i64]) -> Option<usize> {
        if k.len() != self.dim {
            return None;
        }
        let half = (self.n / 2) as i64;
        let mut a = [0usize; 3];
        for d in 0..self.dim {
            if k[d] < -half || k[d] >= half {
                return None;
            }
            a[d] = k[d].rem_euclid(self.n as i64) as usize;
        }
        Some(self.flat_index(a))
    }

    /// Physical coordinates of grid point `idx`.
    pub fn coordinates(&self, idx: usize) -> [f64; 3] {
        let a = self.axis_indices(idx);
        let h = self.box_length() / self.n as f64;
        let mut x = [0.0; 3];
        for d in 0..self.dim {
            x[d] = a[d] as f64 * h;
        }
        x
    }

    /// Modes with any `|k_j| >= n/3` are removed by the 2/3 rule.
    pub fn dealias_cutoff(&self) -> f64 {
        self.n as f64 / 3.0
    }

    #[inline]
    pub fn is_retained(&self, idx: usize) -> bool {
        let cut = self.dealias_cutoff();
        let k = self.wavevector(idx);
        k[..self.dim].iter().all(|&kj| (kj.abs() as f64) < cut)
    }

    /// Largest per-axis wave number kept by dealiasing.
    pub fn max_retained_wavenumber(&self) -> i64 {
        let cut = self.dealias_cutoff();
        let mut k = (self.n / 2) as i64;
        while k as f64 >= cut {
            k -= 1;
        }
        k
    }

    /// Same dimension, `factor` times more points per axis.
    pub fn refined(&self, factor: usize) -> Result<Grid> {
        Grid::new(self.dim, self.n * factor)
    }
}
