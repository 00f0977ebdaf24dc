//! Named initial data. Every constructor returns a solenoidal, zero-mean,
//! dealiased pair at `t = 0`.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dynamics::SolutionPair;
use crate::error::{Error, Result};
use crate::spectral::random::random_band_field;
use crate::spectral::{Grid, VectorField};

pub const NAMES: [&str; 4] = ["orszag_tang_2d", "taylor_green_2d", "random_band", "single_mode"];

struct Params<'a> {
    name: &'a str,
    map: &'a BTreeMap<String, String>,
}

impl Params<'_> {
    fn allow(&self, keys: &[&str]) -> Result<()> {
        match self.map.keys().find(|k| !keys.contains(&k.as_str())) {
            Some(k) => Err(Error::Config(format!("{}: unknown parameter ic.{k}", self.name))),
            None => Ok(()),
        }
    }

    fn num(&self, key: &str, default: f64) -> Result<f64> {
        match self.map.get(key) {
            None => Ok(default),
            Some(v) => v
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("ic.{key}: not a number: {v:?}"))),
        }
    }

    fn list(&self, key: &str) -> Result<Option<Vec<f64>>> {
        self.map
            .get(key)
            .map(|v| {
                v.split([',', ':'])
                    .map(|s| {
                        s.trim()
                            .parse()
                            .map_err(|_| Error::Config(format!("ic.{key}: bad entry {s:?}")))
                    })
                    .collect()
            })
            .transpose()
    }
}

fn require_2d(grid: &Grid, name: &str) -> Result<()> {
    if grid.dim() != 2 {
        return Err(Error::Config(format!("{name} is only defined for N = 2")));
    }
    Ok(())
}

pub fn initial_condition(name: &str, params: &BTreeMap<String, String>, grid: &Grid) -> Result<SolutionPair> {
    let p = Params { name, map: params };
    let pair = match name {
        // u = (−sin x₂, sin x₁), b = (−sin x₂, sin 2x₁).
        "orszag_tang_2d" => {
            require_2d(grid, name)?;
            p.allow(&[])?;
            SolutionPair::new(
                VectorField::from_fn(grid, |x| [-x[1].sin(), x[0].sin(), 0.0]),
                VectorField::from_fn(grid, |x| [-x[1].sin(), (2.0 * x[0]).sin(), 0.0]),
                0.0,
            )?
        }
        // u = (sin x₁ cos x₂, −cos x₁ sin x₂), b = a·(sin 2x₁ cos 2x₂, −cos 2x₁ sin 2x₂).
        "taylor_green_2d" => {
            require_2d(grid, name)?;
            p.allow(&["b_amplitude"])?;
            let a = p.num("b_amplitude", 0.5)?;
            SolutionPair::new(
                VectorField::from_fn(grid, |x| [x[0].sin() * x[1].cos(), -x[0].cos() * x[1].sin(), 0.0]),
                VectorField::from_fn(grid, |x| {
                    let (s1, c1) = (2.0 * x[0]).sin_cos();
                    let (s2, c2) = (2.0 * x[1]).sin_cos();
                    [a * s1 * c2, -a * c1 * s2, 0.0]
                }),
                0.0,
            )?
        }
        "random_band" => random_band(&p, grid)?,
        "single_mode" => single_mode(&p, grid)?,
        other => {
            return Err(Error::Config(format!(
                "unknown initial condition {other:?}; expected one of {}",
                NAMES.join(", ")
            )))
        }
    };
    Ok(pair.cleaned())
}

/// Random solenoidal `u` and `b` on the shell `lo ≤ |k| ≤ hi`, each scaled
/// to root-mean-square magnitude `amplitude`.
fn random_band(p: &Params, grid: &Grid) -> Result<SolutionPair> {
    p.allow(&["seed", "band", "amplitude"])?;
    let seed = p.num("seed", 0.0)?;
    if !(seed >= 0.0 && seed.fract() == 0.0) {
        return Err(Error::Config(format!("ic.seed must be a non-negative integer, got {seed}")));
    }
    let band = p.list("band")?.unwrap_or_else(|| vec![1.0, 4.0]);
    let [lo, hi] = band[..] else {
        return Err(Error::Config("ic.band must be lo:hi".into()));
    };
    if !(lo > 0.0 && hi >= lo) {
        return Err(Error::Config(format!("ic.band {lo}:{hi} must satisfy 0 < lo <= hi")));
    }
    let amplitude = p.num("amplitude", 1.0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed as u64);
    let mut field = || -> Result<VectorField> {
        let comps = (0..grid.dim()).map(|_| random_band_field(grid, &mut rng, lo, hi)).collect();
        let v = VectorField::new(comps)?.dealias().leray_project();
        let rms = v.l2_norm() / grid.domain_volume().sqrt();
        if rms == 0.0 {
            return Err(Error::Config(format!("ic.band {lo}:{hi} holds no retained modes")));
        }
        Ok(v.scaled(amplitude / rms))
    };
    let u = field()?;
    let b = field()?;
    SolutionPair::new(u, b, 0.0)
}

/// `amplitude · e · sin(k·x)` with a unit `e ⟂ k`, in `u`, `b` or both.
fn single_mode(p: &Params, grid: &Grid) -> Result<SolutionPair> {
    p.allow(&["k", "amplitude", "field"])?;
    let dim = grid.dim();
    let k = p.list("k")?.unwrap_or_else(|| {
        let mut k = vec![0.0; dim];
        k[0] = 1.0;
        k
    });
    if k.len() != dim || k.iter().any(|c| c.fract() != 0.0) || k.iter().all(|&c| c == 0.0) {
        return Err(Error::Config(format!("ic.k must be {dim} integers, not all zero")));
    }
    let amplitude = p.num("amplitude", 1.0)?;
    let e = perpendicular_unit(&k);
    let field = || {
        VectorField::from_fn(grid, |x| {
            let phase: f64 = (0..dim).map(|j| k[j] * x[j]).sum();
            let s = amplitude * phase.sin();
            [e[0] * s, e[1] * s, e[2] * s]
        })
    };
    let zero = VectorField::zeros(grid);
    let (u, b) = match p.map.get("field").map(String::as_str).unwrap_or("u") {
        "u" => (field(), zero),
        "b" => (zero, field()),
        "both" => (field(), field()),
        other => return Err(Error::Config(format!("ic.field must be u, b or both, got {other:?}"))),
    };
    SolutionPair::new(u, b, 0.0)
}

fn perpendicular_unit(k: &[f64]) -> [f64; 3] {
    let v = if k.len() == 2 {
        [-k[1], k[0], 0.0]
    } else {
        // k × a with a the axis least aligned with k.
        let a = (0..3)
            .min_by(|&i, &j| k[i].abs().total_cmp(&k[j].abs()))
            .unwrap();
        let mut axis = [0.0; 3];
        axis[a] = 1.0;
        [
            k[1] * axis[2] - k[2] * axis[1],
            k[2] * axis[0] - k[0] * axis[2],
            k[0] * axis[1] - k[1] * axis[0],
        ]
    };
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    fn params(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    #[test]
    fn all_named_fields_are_clean() {
        let g2 = Grid::new(2, 32).unwrap();
        let g3 = Grid::new(3, 16).unwrap();
        for name in NAMES {
            for grid in [&g2, &g3] {
                let Ok(s) = initial_condition(name, &BTreeMap::new(), grid) else {
                    assert!(name.ends_with("_2d") && grid.dim() == 3);
                    continue;
                };
                assert!(s.is_solenoidal(), "{name}");
                assert!(s.u.is_dealiased() && s.b.is_dealiased());
                for c in s.u.components().iter().chain(s.b.components()) {
                    assert_eq!(c.coeffs()[0].norm(), 0.0);
                }
                assert!(s.energy() > 0.0);
            }
        }
    }

    #[test]
    fn orszag_tang_energy() {
        let grid = Grid::new(2, 32).unwrap();
        let s = initial_condition("orszag_tang_2d", &BTreeMap::new(), &grid).unwrap();
        assert!((s.energy() - 4.0 * PI * PI).abs() < 1e-12);
    }

    #[test]
    fn single_mode_energy() {
        // ½‖A sin(k·x)‖² = A²(2π)^N/4.
        let g2 = Grid::new(2, 16).unwrap();
        let s = initial_condition("single_mode", &params(&[("k", "1,0"), ("amplitude", "1")]), &g2).unwrap();
        assert!((s.energy() - PI * PI).abs() < 1e-12);
        assert_eq!(s.b.l2_norm(), 0.0);
        let g3 = Grid::new(3, 8).unwrap();
        let s = initial_condition("single_mode", &params(&[("k", "1,2,0"), ("amplitude", "2"), ("field", "both")]), &g3)
            .unwrap();
        let expected = 2.0 * 4.0 * (2.0 * PI).powi(3) / 4.0;
        assert!((s.energy() - expected).abs() < 1e-10 * expected);
    }

    #[test]
    fn random_band_is_reproducible() {
        let grid = Grid::new(2, 32).unwrap();
        let p = params(&[("seed", "7"), ("band", "2:5"), ("amplitude", "0.5")]);
        let a = initial_condition("random_band", &p, &grid).unwrap();
        let b = initial_condition("random_band", &p, &grid).unwrap();
        assert_eq!(a, b);
        let rms = a.u.l2_norm() / grid.domain_volume().sqrt();
        assert!((rms - 0.5).abs() < 1e-12);
        let c = initial_condition("random_band", &params(&[("seed", "8"), ("band", "2:5")]), &grid).unwrap();
        assert_ne!(a.u, c.u);
    }

    #[test]
    fn bad_requests_are_config_errors() {
        let g = Grid::new(2, 16).unwrap();
        for (name, p) in [
            ("vortex_street", params(&[])),
            ("orszag_tang_2d", params(&[("k", "1")])),
            ("single_mode", params(&[("k", "0,0")])),
            ("single_mode", params(&[("k", "1,0,0")])),
            ("single_mode", params(&[("field", "c")])),
            ("random_band", params(&[("band", "3")])),
            ("random_band", params(&[("seed", "-1")])),
            ("random_band", params(&[("band", "20:30")])),
        ] {
            assert!(matches!(initial_condition(name, &p, &g), Err(Error::Config(_))), "{name} {p:?}");
        }
    }
}
