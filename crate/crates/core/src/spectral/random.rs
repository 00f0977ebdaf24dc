//! Reproducible random real fields for test corpora and initial data.

use num_complex::Complex64;
use rand::Rng;

use super::field::SpectralField;
use super::grid::Grid;

/// Random real field whose spectrum is supported on the modes accepted by
/// `keep(k, |k|)`. Nyquist modes are never populated. Coefficients are
/// uniform in the unit square before conjugate symmetrization.
pub fn random_field_where<R: Rng + ?Sized>(
    grid: &Grid,
    rng: &mut R,
    keep: impl Fn([i64; 3], f64) -> bool,
) -> SpectralField {
    let half = (grid.points_per_axis() / 2) as i64;
    let dim = grid.dim();
    let mut f = SpectralField::zeros(grid);
    let c = f.coeffs_mut();
    for i in 0..grid.len() {
        let conj = grid.conjugate_index(i);
        if conj < i {
            continue;
        }
        let k = grid.wavevector(i);
        if k[..dim].iter().any(|&kj| kj == -half) {
            continue;
        }
        if !keep(k, grid.wavenumber_magnitude(i)) {
            continue;
        }
        let re = rng.gen_range(-1.0..1.0);
        if conj == i {
            c[i] = Complex64::new(re, 0.0);
        } else {
            let z = Complex64::new(re, rng.gen_range(-1.0..1.0));
            c[i] = z;
            c[conj] = z.conj();
        }
    }
    f
}

/// Zero-mean random field on the radial band `lo <= |k| <= hi`.
pub fn random_band_field<R: Rng + ?Sized>(grid: &Grid, rng: &mut R, lo: f64, hi: f64) -> SpectralField {
    random_field_where(grid, rng, |_, r| r > 0.0 && r >= lo && r <= hi)
}

/// Zero-mean random field supported on the 2/3-rule retained band.
pub fn random_dealiased_field<R: Rng + ?Sized>(grid: &Grid, rng: &mut R) -> SpectralField {
    let cut = grid.dealias_cutoff();
    let dim = grid.dim();
    random_field_where(grid, rng, |k, r| {
        r > 0.0 && k[..dim].iter().all(|&kj| (kj.abs() as f64) < cut)
    })
}

/// Zero-mean random field with no Nyquist content and all modes populated.
pub fn random_full_field<R: Rng + ?Sized>(grid: &Grid, rng: &mut R) -> SpectralField {
    random_field_where(grid, rng, |_, r| r > 0.0)
}
