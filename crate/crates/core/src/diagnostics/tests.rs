use std::f64::consts::{E, PI};

use super::series::{read_series_from, write_series_to, HEADER};
use super::*;
use crate::dynamics::{SolutionPair, SystemParams};
use crate::integrator::{run, StepperConfig};
use crate::multiplier::{DissipationSpec, GFunction};
use crate::spectral::{Grid, VectorField};

fn shear(grid: &Grid, amplitude: f64) -> SolutionPair {
    let u = VectorField::from_fn(grid, |x| [amplitude * x[1].sin(), 0.0, 0.0]);
    SolutionPair::new(u, VectorField::zeros(grid), 0.0).unwrap()
}

fn params(nu: f64) -> SystemParams {
    SystemParams::new(2, DissipationSpec::new(nu, 2.0, GFunction::ConstantOne).unwrap(), DissipationSpec::none(1.0))
        .unwrap()
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-10 * b.abs().max(1.0)
}

#[test]
fn zero_state_gives_zero_record() {
    let grid = Grid::new(2, 16).unwrap();
    let r = record(&SolutionPair::zeros(&grid), &params(1.0), &DiagnosticSettings::defaults(2));
    assert_eq!(r, DiagnosticRecord::default());
    assert_eq!(r.split_ratio(), 0.0);
}

#[test]
fn shear_mode_closed_forms() {
    let grid = Grid::new(2, 32).unwrap();
    let r = record(&shear(&grid, 1.0), &params(1.0), &DiagnosticSettings::defaults(2));
    let sq = 2.0 * PI * PI;
    assert!(close(r.energy, PI * PI));
    for v in [r.diss_u, r.x, r.y_s, r.gamma_norm, r.diss_grad_u] {
        assert!(close(v, sq), "{v}");
    }
    assert!(close(r.grad_u_inf, 1.0));
    let m1 = E + sq;
    assert!(close(r.split_low, m1.ln().sqrt() * sq.sqrt()));
    assert!(close(r.split_high, (sq / m1).sqrt()));
    assert_eq!(r.diss_b, 0.0);
    assert!(r.divergence < 1e-15);
}

#[test]
fn settings_defaults_and_validation() {
    let s = DiagnosticSettings::defaults(2);
    assert_eq!((s.gamma, s.s), (2.5, 5.0));
    assert_eq!(DiagnosticSettings::defaults(3).gamma, 3.0);
    assert!(s.validate(2).is_ok());
    assert!(DiagnosticSettings { gamma: 2.0, s: 5.0 }.validate(2).is_err());
    assert!(DiagnosticSettings { gamma: 3.0, s: 5.0 }.validate(2).is_err());
}

fn decay_series(grid: &Grid, nu: f64, dt: f64, t_end: f64, cadence: usize) -> Vec<DiagnosticRecord> {
    let p = params(nu).without_nonlinearity();
    let mut tracker = DiagnosticTracker::new(&p, DiagnosticSettings::defaults(2));
    run(&shear(grid, 1.0), &p, &StepperConfig::fixed(dt, t_end), cadence, |s| {
        tracker.observe(s);
    })
    .unwrap();
    tracker.into_records()
}

#[test]
fn cumulative_dissipation_is_trapezoidal() {
    let grid = Grid::new(2, 16).unwrap();
    for cadence in [1, 2] {
        let series = decay_series(&grid, 0.5, 0.01, 0.5, cadence);
        let mut acc = 0.0;
        for w in series.windows(2) {
            acc += 0.5 * (w[1].t - w[0].t) * (w[0].diss_u + w[1].diss_u);
            assert!((w[1].cum_diss - acc).abs() < 1e-14 * acc.max(1.0));
            assert!(w[1].cum_diss >= w[0].cum_diss);
        }
        // Exact: ∫ 2π² e^{−t} dt.
        let last = series.last().unwrap();
        let exact = 2.0 * PI * PI * (1.0 - (-last.t).exp());
        let h = 0.01 * cadence as f64;
        assert!((last.cum_diss - exact).abs() < h * h * exact);
    }
}

#[test]
fn linear_decay_balances_energy() {
    let grid = Grid::new(2, 16).unwrap();
    let series = decay_series(&grid, 0.01, 0.01, 1.0, 1);
    let residual = energy_balance_residual(&series, 0.01, 0.0).unwrap();
    assert!(residual < 1e-8, "{residual}");
    assert!(energy_balance_residual(&series[..2], 0.01, 0.0).is_err());
    let zeros = vec![DiagnosticRecord::default(); 4];
    assert!(energy_balance_residual(&zeros, 0.01, 0.0).is_err());
}

#[test]
fn decaying_runs_give_zero_constants() {
    let grid = Grid::new(2, 16).unwrap();
    let series = decay_series(&grid, 0.5, 0.01, 1.0, 1);
    let g = gronwall_bound_check(&series, &GFunction::ConstantOne).unwrap();
    assert_eq!(g.constant, 0.0);
    assert!(g.max_lhs < 0.0);
    let gamma = gamma_log_derivative_check(&series).unwrap();
    assert_eq!(gamma.constant, 0.0);
    assert!(gamma_log_derivative_check(&series[..49]).is_err());
}

#[test]
fn stationary_zero_state_has_zero_log_derivative() {
    let series: Vec<DiagnosticRecord> = (0..60)
        .map(|i| DiagnosticRecord {
            t: i as f64 * 0.1,
            ..Default::default()
        })
        .collect();
    let r = gamma_log_derivative_check(&series).unwrap();
    assert_eq!((r.constant, r.max_log_derivative), (0.0, 0.0));
}

#[test]
fn gronwall_constant_for_growing_x() {
    // X grows linearly with g ≡ 1: F(e+X) = ln ln(e+X).
    let series: Vec<DiagnosticRecord> = (0..20)
        .map(|i| DiagnosticRecord {
            t: i as f64,
            x: 10.0 * i as f64,
            cum_diss: i as f64,
            ..Default::default()
        })
        .collect();
    let r = gronwall_bound_check(&series, &GFunction::ConstantOne).unwrap();
    let f = |x: f64| (E + x).ln().ln();
    let expected = (1..20)
        .map(|i| (f(10.0 * i as f64) - f(0.0)) / (2.0 * i as f64))
        .fold(0.0, f64::max);
    assert!((r.constant - expected).abs() < 1e-12);
    assert!(gronwall_bound_check(&[], &GFunction::ConstantOne).is_err());
}

#[test]
fn series_round_trip() {
    let grid = Grid::new(2, 16).unwrap();
    let series = decay_series(&grid, 0.3, 0.05, 0.5, 2);
    let mut buf = Vec::new();
    write_series_to(&mut buf, &series).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert_eq!(text.lines().next().unwrap(), HEADER.join(","));
    assert_eq!(read_series_from(buf.as_slice()).unwrap(), series);
    let mut empty = Vec::new();
    write_series_to(&mut empty, &[]).unwrap();
    assert!(read_series_from(empty.as_slice()).unwrap().is_empty());
    assert!(read_series_from("a,b\n1,2\n".as_bytes()).is_err());
}
