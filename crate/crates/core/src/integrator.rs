//! Integrating-factor RK4 (Lawson) time stepping.
//!
//! The dissipation is diagonal in Fourier space and is integrated exactly,
//! `E_h(k) = exp(−ν m(|k|)² h)`, while the nonlinearity goes through the
//! classical four-stage scheme in the transformed variable `E_{−t} û`.

use std::time::{Duration, Instant};

use num_complex::Complex64;

use crate::dynamics::{nonlinear_tendency, SolutionPair, SystemParams};
use crate::error::{Error, Result};
use crate::par;
use crate::spectral::{Grid, VectorField};

/// Step-size policy.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TimeStep {
    Fixed(f64),
    /// `dt = cfl / (max(|u|, |b|) · k_max)`, never larger than `dt_max`.
    Adaptive { cfl: f64, dt_max: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepperConfig {
    pub time_step: TimeStep,
    pub t_end: f64,
    pub max_steps: usize,
}

pub const DEFAULT_CFL: f64 = 0.5;

impl StepperConfig {
    pub fn fixed(dt: f64, t_end: f64) -> Self {
        StepperConfig {
            time_step: TimeStep::Fixed(dt),
            t_end,
            max_steps: usize::MAX,
        }
    }

    pub fn adaptive(cfl: f64, dt_max: f64, t_end: f64) -> Self {
        StepperConfig {
            time_step: TimeStep::Adaptive { cfl, dt_max },
            t_end,
            max_steps: usize::MAX,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        match self.time_step {
            TimeStep::Fixed(dt) if !(dt > 0.0 && dt.is_finite()) => return bad(format!("dt = {dt} must be > 0")),
            TimeStep::Adaptive { cfl, dt_max } => {
                if !(cfl > 0.0 && cfl <= 1.0) {
                    return bad(format!("cfl number {cfl} not in (0, 1]"));
                }
                if !(dt_max > 0.0 && dt_max.is_finite()) {
                    return bad(format!("dt_max = {dt_max} must be > 0"));
                }
            }
            _ => {}
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return bad(format!("t_end = {} must be finite and >= 0", self.t_end));
        }
        Ok(())
    }
}

/// Final state of a completed run.
#[derive(Clone, Debug)]
pub struct RunReport {
    pub state: SolutionPair,
    pub steps: usize,
    pub wall_time: Duration,
    /// Largest `dt · max(|u|,|b|) · k_max` over all steps.
    pub max_courant: f64,
}

/// Stepper for one parameter set; caches the dissipation symbols.
#[derive(Clone, Debug)]
pub struct Integrator {
    params: SystemParams,
    grid: Grid,
    /// `ν m₁²` and `η m₂²` by flat index.
    rate_u: Vec<f64>,
    rate_b: Vec<f64>,
}

struct Factors {
    u: Vec<f64>,
    b: Vec<f64>,
}

impl Integrator {
    pub fn new(params: &SystemParams, grid: &Grid) -> Result<Self> {
        if grid.dim() != params.dim {
            return Err(Error::InvalidParameter(format!(
                "parameters for N = {} on a {}-dimensional grid",
                params.dim,
                grid.dim()
            )));
        }
        let rate = |spec: &crate::multiplier::DissipationSpec| -> Vec<f64> {
            let c = spec.coefficient();
            spec.symbol_table(grid).into_iter().map(|m| c * m * m).collect()
        };
        Ok(Integrator {
            rate_u: rate(&params.diss_u),
            rate_b: rate(&params.diss_b),
            params: params.clone(),
            grid: grid.clone(),
        })
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    fn factors(&self, h: f64) -> Factors {
        Factors {
            u: self.rate_u.iter().map(|r| (-r * h).exp()).collect(),
            b: self.rate_b.iter().map(|r| (-r * h).exp()).collect(),
        }
    }

    fn tendency(&self, s: &SolutionPair) -> Result<(VectorField, VectorField)> {
        if self.params.nonlinear {
            nonlinear_tendency(s)
        } else {
            Ok((VectorField::zeros(&self.grid), VectorField::zeros(&self.grid)))
        }
    }

    /// One step of size `dt`. Fails with [`Error::BlowUp`] if any coefficient
    /// of the result is not finite.
    pub fn step(&self, state: &SolutionPair, dt: f64) -> Result<SolutionPair> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidParameter(format!("dt = {dt} must be > 0")));
        }
        if state.grid() != &self.grid {
            return Err(Error::GridMismatch);
        }
        let full = self.factors(dt);
        let half = self.factors(0.5 * dt);
        let (u, b) = (&state.u, &state.b);
        let t = state.time;

        let k1 = self.tendency(state)?;
        let a = SolutionPair {
            u: scale_modes(&combine(&[(1.0, u), (0.5 * dt, &k1.0)]), &half.u),
            b: scale_modes(&combine(&[(1.0, b), (0.5 * dt, &k1.1)]), &half.b),
            time: t + 0.5 * dt,
        };
        let k2 = self.tendency(&a)?;
        let (hu, hb) = (scale_modes(u, &half.u), scale_modes(b, &half.b));
        let bs = SolutionPair {
            u: combine(&[(1.0, &hu), (0.5 * dt, &k2.0)]),
            b: combine(&[(1.0, &hb), (0.5 * dt, &k2.1)]),
            time: t + 0.5 * dt,
        };
        let k3 = self.tendency(&bs)?;
        let (fu, fb) = (scale_modes(u, &full.u), scale_modes(b, &full.b));
        let c = SolutionPair {
            u: combine(&[(1.0, &fu), (dt, &scale_modes(&k3.0, &half.u))]),
            b: combine(&[(1.0, &fb), (dt, &scale_modes(&k3.1, &half.b))]),
            time: t + dt,
        };
        let k4 = self.tendency(&c)?;

        let mid_u = scale_modes(&combine(&[(1.0, &k2.0), (1.0, &k3.0)]), &half.u);
        let mid_b = scale_modes(&combine(&[(1.0, &k2.1), (1.0, &k3.1)]), &half.b);
        let w = dt / 6.0;
        let next = SolutionPair {
            u: combine(&[(1.0, &fu), (w, &scale_modes(&k1.0, &full.u)), (2.0 * w, &mid_u), (w, &k4.0)]),
            b: combine(&[(1.0, &fb), (w, &scale_modes(&k1.1, &full.b)), (2.0 * w, &mid_b), (w, &k4.1)]),
            time: t + dt,
        };
        if !next.all_finite() {
            return Err(Error::BlowUp { time: next.time });
        }
        Ok(next)
    }

    /// `max(|u|, |b|)·k_max` on grid samples: the advective rate limiting dt.
    pub fn advective_rate(&self, state: &SolutionPair) -> f64 {
        let speed = state.u.max_magnitude().max(state.b.max_magnitude());
        speed * self.grid.max_retained_wavenumber() as f64
    }

    /// Steps from `state0` to `config.t_end` (or `max_steps`), calling
    /// `observer` on the initial state, after every `cadence`-th step and on
    /// the final state.
    pub fn run(
        &self,
        state0: &SolutionPair,
        config: &StepperConfig,
        cadence: usize,
        mut observer: impl FnMut(&SolutionPair),
    ) -> Result<RunReport> {
        config.validate()?;
        let cadence = cadence.max(1);
        let clock = Instant::now();
        let t0 = state0.time;
        let mut state = state0.clone();
        let mut steps = 0;
        let mut max_courant: f64 = 0.0;
        let mut observed_at = 0;
        observer(&state);

        let span = config.t_end - t0;
        let fixed_steps = match config.time_step {
            TimeStep::Fixed(dt) if span > 0.0 => (span / dt - 1e-9).ceil() as usize,
            _ => 0,
        };
        while steps < config.max_steps {
            let dt = match config.time_step {
                TimeStep::Fixed(dt) => {
                    if steps >= fixed_steps {
                        break;
                    }
                    if steps + 1 == fixed_steps {
                        config.t_end - state.time
                    } else {
                        dt
                    }
                }
                TimeStep::Adaptive { cfl, dt_max } => {
                    let remaining = config.t_end - state.time;
                    if remaining <= 1e-12 * config.t_end.max(1.0) {
                        break;
                    }
                    let rate = self.advective_rate(&state);
                    let dt = if rate > 0.0 { (cfl / rate).min(dt_max) } else { dt_max };
                    dt.min(remaining)
                }
            };
            let rate = if matches!(config.time_step, TimeStep::Adaptive { .. }) || steps % cadence == 0 {
                self.advective_rate(&state)
            } else {
                0.0
            };
            max_courant = max_courant.max(dt * rate);
            let mut next = self.step(&state, dt)?;
            steps += 1;
            if let TimeStep::Fixed(h) = config.time_step {
                next.time = if steps == fixed_steps { config.t_end } else { t0 + steps as f64 * h };
            }
            state = next;
            if steps % cadence == 0 {
                observer(&state);
                observed_at = steps;
            }
        }
        if observed_at != steps {
            observer(&state);
        }
        Ok(RunReport {
            state,
            steps,
            wall_time: clock.elapsed(),
            max_courant,
        })
    }
}

/// One step with a freshly built [`Integrator`].
pub fn step(state: &SolutionPair, params: &SystemParams, dt: f64) -> Result<SolutionPair> {
    Integrator::new(params, state.grid())?.step(state, dt)
}

/// Runs with a freshly built [`Integrator`].
pub fn run(
    state0: &SolutionPair,
    params: &SystemParams,
    config: &StepperConfig,
    cadence: usize,
    observer: impl FnMut(&SolutionPair),
) -> Result<RunReport> {
    Integrator::new(params, state0.grid())?.run(state0, config, cadence, observer)
}

fn scale_modes(v: &VectorField, factor: &[f64]) -> VectorField {
    v.map(|c| c.apply_symbol(|i| factor[i]))
}

/// `Σ w_i v_i` over fields on a common grid.
fn combine(terms: &[(f64, &VectorField)]) -> VectorField {
    let (_, first) = terms[0];
    let mut out = first.clone();
    for (d, c) in out.components_mut().iter_mut().enumerate() {
        let sources: Vec<(f64, &[Complex64])> = terms
            .iter()
            .map(|(w, v)| (*w, v.component(d).coeffs()))
            .collect();
        par::map_indexed(c.coeffs_mut(), |i, _| {
            sources.iter().fold(Complex64::new(0.0, 0.0), |acc, (w, s)| acc + s[i] * *w)
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::multiplier::{DissipationSpec, GFunction};
    use crate::spectral::SpectralField;

    fn orszag_tang(grid: &Grid) -> SolutionPair {
        let u = VectorField::from_fn(grid, |x| [-x[1].sin(), x[0].sin(), 0.0]);
        let b = VectorField::from_fn(grid, |x| [-x[1].sin(), (2.0 * x[0]).sin(), 0.0]);
        SolutionPair::new(u, b, 0.0).unwrap().cleaned()
    }

    fn params(nu: f64, alpha: f64, g: GFunction) -> SystemParams {
        SystemParams::new(2, DissipationSpec::new(nu, alpha, g).unwrap(), DissipationSpec::none(1.0)).unwrap()
    }

    fn single_mode(grid: &Grid, k: [i64; 2]) -> SolutionPair {
        // u = e sin(k·x) with e ⟂ k.
        let norm = ((k[0] * k[0] + k[1] * k[1]) as f64).sqrt();
        let e = [-(k[1] as f64) / norm, k[0] as f64 / norm];
        let u = VectorField::from_fn(grid, |x| {
            let s = (k[0] as f64 * x[0] + k[1] as f64 * x[1]).sin();
            [e[0] * s, e[1] * s, 0.0]
        });
        SolutionPair::new(u, VectorField::zeros(grid), 0.0).unwrap()
    }

    #[test]
    fn linear_decay_is_exact_for_any_dt() {
        let grid = Grid::new(2, 16).unwrap();
        let s0 = single_mode(&grid, [1, 0]);
        let p = params(1.0, 2.0, GFunction::ConstantOne).without_nonlinearity();
        for dt in [0.5, 0.1, 0.013] {
            let out = run(&s0, &p, &StepperConfig::fixed(dt, 1.3), 1, |_| {}).unwrap();
            let expected = s0.u.scaled((-1.3_f64).exp());
            let err = out.state.u.axpy(-1.0, &expected).unwrap().l2_norm() / expected.l2_norm();
            assert!(err < 1e-13, "dt {dt}: {err}");
            assert_eq!(out.state.time, 1.3);
        }
    }

    #[test]
    fn random_linear_decay() {
        let grid = Grid::new(2, 32).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let catalog = [
            GFunction::ConstantOne,
            GFunction::power_log(0.5).unwrap(),
            GFunction::IteratedLog,
            GFunction::power(0.1).unwrap(),
            GFunction::spiky(1.0, 2.0).unwrap(),
        ];
        for _ in 0..20 {
            let k = [rng.gen_range(-6..=6), rng.gen_range(1..=6)];
            let alpha = rng.gen_range(1.0..3.0);
            let g = catalog[rng.gen_range(0..catalog.len())].clone();
            let nu = rng.gen_range(0.001..0.05);
            let r = ((k[0] * k[0] + k[1] * k[1]) as f64).sqrt();
            let m = r.powf(alpha) / g.eval(r);
            let p = params(nu, alpha, g).without_nonlinearity();
            let s0 = single_mode(&grid, k);
            let t = 0.7;
            let out = run(&s0, &p, &StepperConfig::fixed(rng.gen_range(0.01..0.3), t), 3, |_| {}).unwrap();
            let expected = s0.u.scaled((-nu * m * m * t).exp());
            let err = out.state.u.axpy(-1.0, &expected).unwrap().l2_norm() / s0.u.l2_norm();
            assert!(err < 1e-13, "{k:?} {alpha}: {err}");
        }
    }

    #[test]
    fn no_dissipation_no_nonlinearity_is_identity() {
        let grid = Grid::new(2, 16).unwrap();
        let s0 = orszag_tang(&grid);
        let p = SystemParams::new(2, DissipationSpec::none(2.0), DissipationSpec::none(2.0))
            .unwrap()
            .without_nonlinearity();
        let s1 = step(&s0, &p, 0.1).unwrap();
        assert_eq!(s1.u, s0.u);
        assert_eq!(s1.b, s0.b);
    }

    #[test]
    fn t_end_zero_returns_initial_state() {
        let grid = Grid::new(2, 16).unwrap();
        let s0 = orszag_tang(&grid);
        let mut seen = 0;
        let out = run(&s0, &params(1.0, 2.0, GFunction::ConstantOne), &StepperConfig::fixed(0.01, 0.0), 1, |_| seen += 1).unwrap();
        assert_eq!(out.state, s0);
        assert_eq!((out.steps, seen), (0, 1));
    }

    #[test]
    fn observer_cadence() {
        let grid = Grid::new(2, 16).unwrap();
        let s0 = orszag_tang(&grid);
        let mut times = Vec::new();
        run(&s0, &params(0.1, 2.0, GFunction::ConstantOne), &StepperConfig::fixed(0.01, 0.105), 4, |s| times.push(s.time)).unwrap();
        assert_eq!(times.len(), 4);
        assert!((times[1] - 0.04).abs() < 1e-15 && (times[2] - 0.08).abs() < 1e-15);
        assert_eq!(times[3], 0.105);
    }

    #[test]
    fn runs_are_bit_identical() {
        let grid = Grid::new(2, 32).unwrap();
        let s0 = orszag_tang(&grid);
        let p = params(0.05, 2.0, GFunction::IteratedLog);
        let go = || {
            let mut e = Vec::new();
            let out = run(&s0, &p, &StepperConfig::fixed(0.01, 0.2), 2, |s| e.push(s.energy())).unwrap();
            (out.state, e)
        };
        assert_eq!(go(), go());
    }

    #[test]
    fn inviscid_energy_is_conserved() {
        let grid = Grid::new(2, 32).unwrap();
        let s0 = orszag_tang(&grid);
        let p = SystemParams::new(2, DissipationSpec::none(2.0), DissipationSpec::none(2.0)).unwrap();
        let e0 = s0.energy();
        let out = run(&s0, &p, &StepperConfig::fixed(2e-3, 0.2), 10, |s| {
            assert!(((s.energy() - e0) / e0).abs() < 1e-9);
            assert!(s.relative_divergence() < 1e-12);
        })
        .unwrap();
        assert_eq!(out.steps, 100);
        assert!((s0.energy() - 4.0 * PI * PI).abs() < 1e-12);
    }

    #[test]
    fn adaptive_step_respects_cfl() {
        let grid = Grid::new(2, 32).unwrap();
        let s0 = orszag_tang(&grid);
        let p = params(0.05, 2.0, GFunction::ConstantOne);
        let out = run(&s0, &p, &StepperConfig::adaptive(0.5, 0.1, 0.3), 1, |_| {}).unwrap();
        assert!(out.max_courant <= 0.5 * (1.0 + 1e-12), "{}", out.max_courant);
        assert!((out.state.time - 0.3).abs() < 1e-12);
        assert!(out.steps > 3);
    }

    #[test]
    fn blow_up_is_reported() {
        let grid = Grid::new(2, 16).unwrap();
        let mut s0 = orszag_tang(&grid);
        let mut c = SpectralField::zeros(&grid);
        c.coeffs_mut()[1] = Complex64::new(f64::NAN, 0.0);
        s0.u.components_mut()[0] = c;
        let err = step(&s0, &params(1.0, 2.0, GFunction::ConstantOne), 0.01).unwrap_err();
        assert!(matches!(err, Error::BlowUp { time } if time == 0.01));
    }

    #[test]
    fn rejects_bad_config() {
        assert!(StepperConfig::fixed(0.0, 1.0).validate().is_err());
        assert!(StepperConfig::fixed(0.1, -1.0).validate().is_err());
        assert!(StepperConfig::adaptive(1.5, 0.1, 1.0).validate().is_err());
    }
}
