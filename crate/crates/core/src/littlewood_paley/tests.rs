use std::f64::consts::{E, PI};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::error::Error;
use crate::multiplier::{DissipationSpec, GFunction};
use crate::spectral::random::{random_band_field, random_dealiased_field, random_full_field};
use crate::spectral::{Grid, SpectralField, VectorField};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn max_diff(a: &SpectralField, b: &SpectralField) -> f64 {
    a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

#[test]
fn cutoff_shapes() {
    assert_eq!(chi(0.0), 1.0);
    assert_eq!(chi(0.75), 1.0);
    assert_eq!(chi(1.0), 0.0);
    assert!((chi(0.875) - 0.5).abs() < 1e-15);
    let mut prev = 1.0;
    for i in 0..=1000 {
        let c = chi(0.7 + 0.35 * i as f64 / 1000.0);
        assert!(c <= prev && (0.0..=1.0).contains(&c));
        prev = c;
    }
    for r in [1.0, 1.2, 1.5] {
        assert_eq!(phi0(r), 1.0);
    }
    for r in [0.0, 0.5, 0.75, 2.0, 3.0] {
        assert_eq!(phi0(r), 0.0);
    }
    assert!(phi0(0.9) > 0.0 && phi0(1.8) > 0.0);
    assert_eq!(phi(3, 8.0), phi0(1.0));
}

#[test]
fn partition_of_unity_on_every_mode() {
    for (dim, n, j_max) in [(2, 8, 2), (2, 16, 3), (2, 128, 6), (3, 8, 3), (3, 16, 4)] {
        let grid = Grid::new(dim, n).unwrap();
        let part = DyadicPartition::new(&grid);
        assert_eq!(part.j_max(), j_max);
        for i in 0..grid.len() {
            let sum: f64 = part.indices().map(|j| part.profile(j).unwrap()[i]).sum();
            assert!((sum - 1.0).abs() <= 1e-12, "{dim}D n={n} mode {i}: {sum}");
        }
    }
}

#[test]
fn block_supports_lie_in_annuli() {
    let grid = Grid::new(2, 64).unwrap();
    let part = DyadicPartition::new(&grid);
    for j in 0..=part.j_max() {
        let p = part.profile(j).unwrap();
        for i in 0..grid.len() {
            let r = grid.wavenumber_magnitude(i);
            if p[i] != 0.0 {
                assert!(r > (j as f64 - 1.0).exp2() && r < (j as f64 + 1.0).exp2());
            }
        }
    }
    assert!(part.profile(-2).is_none() && part.profile(part.j_max() + 1).is_none());
}

#[test]
fn single_dyadic_mode_hits_neighbouring_blocks_only() {
    let grid = Grid::new(2, 64).unwrap();
    let part = DyadicPartition::new(&grid);
    for j in 0..5 {
        let k = 1_i64 << j;
        let f = SpectralField::from_fn(&grid, |x| (k as f64 * x[0]).cos());
        let blocks = part.dyadic_blocks(&f).unwrap();
        for (b, jj) in blocks.iter().zip(part.indices()) {
            if (jj - j).abs() > 1 {
                assert!(b.max_abs_coeff() < 1e-15, "j={j} block {jj}");
            }
        }
        assert!(blocks.iter().any(|b| b.max_abs_coeff() > 0.0));
    }
}

#[test]
fn zero_field_and_reconstruction() {
    let mut r = rng(3);
    for (dim, n) in [(2, 32), (3, 16)] {
        let grid = Grid::new(dim, n).unwrap();
        let part = DyadicPartition::new(&grid);
        let zero = SpectralField::zeros(&grid);
        assert!(part.dyadic_blocks(&zero).unwrap().iter().all(|b| b.max_abs_coeff() == 0.0));
        for _ in 0..10 {
            let f = random_full_field(&grid, &mut r);
            let blocks = part.dyadic_blocks(&f).unwrap();
            let mut sum = SpectralField::zeros(&grid);
            for b in &blocks {
                sum = sum.axpy(1.0, b).unwrap();
            }
            assert!(max_diff(&sum, &f) <= 1e-12 * f.max_abs_coeff());
        }
    }
    let other = Grid::new(2, 16).unwrap();
    let part = DyadicPartition::new(&Grid::new(2, 32).unwrap());
    assert!(matches!(part.dyadic_blocks(&SpectralField::zeros(&other)), Err(Error::GridMismatch)));
}

#[test]
fn blocks_two_apart_are_orthogonal() {
    let grid = Grid::new(2, 64).unwrap();
    let part = DyadicPartition::new(&grid);
    let f = random_full_field(&grid, &mut rng(4));
    let blocks = part.dyadic_blocks(&f).unwrap();
    let scale = f.inner(&f).unwrap();
    for a in 0..blocks.len() {
        for b in a + 2..blocks.len() {
            assert!(blocks[a].inner(&blocks[b]).unwrap().abs() <= 1e-12 * scale);
        }
    }
}

#[test]
fn besov_norm_basics() {
    let grid = Grid::new(2, 32).unwrap();
    let part = DyadicPartition::new(&grid);
    let idx = BesovIndex::new(1.0, 2.0, 2.0).unwrap();
    assert_eq!(besov_norm(&SpectralField::zeros(&grid), idx, &part).unwrap(), 0.0);
    // cos(4x₁) lives entirely in block 2, where Φ̂_2(4) = 1.
    let f = SpectralField::from_fn(&grid, |x| (4.0 * x[0]).cos());
    for s in [0.0, 0.5, 1.5] {
        let n = besov_norm(&f, BesovIndex::new(s, f64::INFINITY, f64::INFINITY).unwrap(), &part).unwrap();
        assert!((n - 4f64.powf(s)).abs() < 1e-12 * 4f64.powf(s));
    }
    assert!(matches!(BesovIndex::new(1.0, 3.0, 2.0), Err(Error::UnsupportedNorm(_))));
}

#[test]
fn besov_two_two_tracks_sobolev() {
    let mut r = rng(5);
    for n in [16, 32, 64] {
        let grid = Grid::new(2, n).unwrap();
        let part = DyadicPartition::new(&grid);
        for s in [0.0, 1.0, 2.0] {
            for _ in 0..10 {
                let f = random_full_field(&grid, &mut r);
                let ratio = besov_norm(&f, BesovIndex::new(s, 2.0, 2.0).unwrap(), &part).unwrap() / f.hs_norm(s);
                assert!((0.25..=4.0).contains(&ratio), "n={n} s={s}: {ratio}");
            }
        }
    }
}

#[test]
fn bernstein_single_modes() {
    let grid = Grid::new(2, 64).unwrap();
    for (k, j, expected) in [(4.0, 2, 1.0), (3.0, 2, 0.75), (5.0, 2, 1.25), (8.0, 3, 1.0)] {
        let f = SpectralField::from_fn(&grid, |x| (k * x[0]).cos());
        let ratio = bernstein_ratio(&f, j, 1, 2.0, 2.0).unwrap();
        assert!((ratio - expected).abs() < 1e-12, "k={k}: {ratio}");
        assert!((0.5..=2.0).contains(&ratio));
    }
    let f = SpectralField::from_fn(&grid, |x| (4.0 * x[1]).sin());
    let ratio = bernstein_fractional_ratio(&f, 2, 0.5, 2.0, 2.0).unwrap();
    assert!((ratio - 1.0).abs() < 1e-12);
}

#[test]
fn bernstein_rejects_bad_input() {
    let grid = Grid::new(2, 32).unwrap();
    let f = SpectralField::from_fn(&grid, |x| x[0].cos());
    assert!(matches!(bernstein_ratio(&f, 2, 1, 2.0, 2.0), Err(Error::SupportViolation(_))));
    let f = SpectralField::from_fn(&grid, |x| (4.0 * x[0]).cos());
    assert!(bernstein_ratio(&f, 2, 0, f64::INFINITY, 2.0).is_err());
    assert!(bernstein_ratio(&f, 2, 0, 2.0, 3.0).is_err());
}

#[test]
fn bernstein_corpus_is_bounded_both_ways() {
    let mut r = rng(6);
    let grid = Grid::new(2, 64).unwrap();
    for j in 1..=4 {
        let lo = (j as f64 - 1.0).exp2();
        let hi = (j as f64 + 1.0).exp2();
        for _ in 0..10 {
            let f = random_field_in_annulus(&grid, &mut r, lo, hi);
            let d = bernstein_ratio(&f, j, 1, 2.0, 2.0).unwrap();
            assert!((0.5 / 2f64.sqrt()..=2.0).contains(&d), "{d}");
            let up = bernstein_ratio(&f, j, 0, 2.0, f64::INFINITY).unwrap();
            assert!(up > 0.0 && up < 2.0, "{up}");
        }
    }
}

fn random_field_in_annulus(grid: &Grid, r: &mut ChaCha8Rng, lo: f64, hi: f64) -> SpectralField {
    crate::spectral::random::random_field_where(grid, r, |_, k| k > lo && k < hi)
}

#[test]
fn commutator_exponents() {
    assert!(CommutatorExponents::L2_LINF.resolve_ok());
    let inf = f64::INFINITY;
    for (p, p1, p2, p3, p4) in [(2.0, 2.0, 2.0, 2.0, 2.0), (1.0, 2.0, 2.0, 2.0, 2.0), (inf, inf, inf, inf, inf), (2.0, 3.0, 2.0, 2.0, inf)] {
        let e = CommutatorExponents { p, p1, p2, p3, p4 };
        assert!(!e.resolve_ok(), "{e:?}");
    }
}

impl CommutatorExponents {
    fn resolve_ok(&self) -> bool {
        let grid = Grid::new(2, 16).unwrap();
        let f = SpectralField::from_fn(&grid, |x| x[0].cos());
        match commutator_ratio(&f, &f, 1.0, *self) {
            Err(Error::IncompatibleExponents(_)) => false,
            Ok(_) => true,
            Err(e) => panic!("{e}"),
        }
    }
}

#[test]
fn commutator_vanishes_for_constant_f() {
    let grid = Grid::new(2, 32).unwrap();
    let g = random_dealiased_field(&grid, &mut rng(7));
    let f = SpectralField::from_fn(&grid, |_| 2.5);
    for s in [0.5, 1.0, 2.0] {
        assert_eq!(commutator_ratio(&f, &g, s, CommutatorExponents::L2_LINF).unwrap(), 0.0);
    }
}

#[test]
fn commutator_two_mode_closed_form() {
    let grid = Grid::new(2, 16).unwrap();
    let f = SpectralField::from_fn(&grid, |x| x[0].cos());
    let g = SpectralField::from_fn(&grid, |x| (2.0 * x[1]).cos());
    let ratio = commutator_ratio(&f, &g, 1.0, CommutatorExponents::L2_LINF).unwrap();
    let expected = (5f64.sqrt() - 2.0) * PI / (2.0 * 2f64.sqrt() * PI);
    assert!((ratio - expected).abs() < 1e-12, "{ratio} vs {expected}");
}

#[test]
fn commutator_requires_dealiased_input() {
    let grid = Grid::new(2, 16).unwrap();
    let f = random_full_field(&grid, &mut rng(8));
    let g = random_band_field(&grid, &mut rng(9), 1.0, 3.0);
    assert!(matches!(
        commutator_ratio(&f, &g, 1.0, CommutatorExponents::L2_LINF),
        Err(Error::SupportViolation(_))
    ));
}

#[test]
fn gradient_split_closed_forms() {
    let grid = Grid::new(2, 32).unwrap();
    let spec = DissipationSpec::new(1.0, 2.0, GFunction::ConstantOne).unwrap();
    let zero = grad_uinf_split(&VectorField::zeros(&grid), &spec, E).unwrap();
    assert_eq!((zero.low_term, zero.high_term, zero.lhs, zero.ratio()), (0.0, 0.0, 0.0, 0.0));
    let u = VectorField::from_fn(&grid, |x| [x[1].sin(), 0.0, 0.0]);
    let norm = PI * 2f64.sqrt();
    let split = grad_uinf_split(&u, &spec, E).unwrap();
    assert!((split.low_term - norm).abs() < 1e-12);
    assert!((split.high_term - norm / E.sqrt()).abs() < 1e-12);
    assert!((split.lhs - 1.0).abs() < 1e-12);
    assert!(split.ratio().is_finite());
    let split = grad_uinf_split(&u, &spec, 100.0).unwrap();
    assert!((split.low_term - norm * 100f64.ln().sqrt()).abs() < 1e-12);
    assert!(grad_uinf_split(&u, &spec, 2.0).is_err());
}

