use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use logmhd::dynamics::{energy_flux_identity, SolutionPair, SystemParams};
use logmhd::littlewood_paley::{phi, psi};
use logmhd::multiplier::{osgood_primitive, DissipationSpec, GFunction};
use logmhd::spectral::random::{random_dealiased_field, random_full_field};
use logmhd::spectral::{Grid, SpectralField, VectorField};

fn g_strategy() -> impl Strategy<Value = GFunction> {
    prop_oneof![
        Just(GFunction::ConstantOne),
        Just(GFunction::IteratedLog),
        (0.01..2.0f64).prop_map(|c| GFunction::power_log(c).unwrap()),
        (0.01..1.0f64).prop_map(|e| GFunction::power(e).unwrap()),
        (0.2..3.0f64, 1.1..4.0f64).prop_map(|(p, h)| GFunction::spiky(p, h).unwrap()),
    ]
}

fn grid_strategy() -> impl Strategy<Value = Grid> {
    prop_oneof![
        Just(Grid::new(2, 8).unwrap()),
        Just(Grid::new(2, 16).unwrap()),
        Just(Grid::new(3, 8).unwrap()),
    ]
}

fn solenoidal(grid: &Grid, rng: &mut ChaCha8Rng) -> VectorField {
    let comps = (0..grid.dim()).map(|_| random_dealiased_field(grid, rng)).collect();
    VectorField::new(comps).unwrap().leray_project()
}

proptest! {
    #[test]
    fn partition_sums_to_one(r in 0.0..1e6f64) {
        let total = psi(r) + (0..40).map(|j| phi(j, r)).sum::<f64>();
        prop_assert!((total - 1.0).abs() < 1e-14, "r = {r}: {total}");
    }

    #[test]
    fn g_is_at_least_one_and_monotone(g in g_strategy(), a in 0.0..1e8f64, b in 0.0..1e8f64) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(g.eval(lo) >= 1.0);
        prop_assert!(g.eval(lo) <= g.eval(hi) * (1.0 + 1e-15));
    }

    #[test]
    fn symbol_is_nonnegative(g in g_strategy(), alpha in 0.0..4.0f64, r in 0.0..1e4f64) {
        let d = DissipationSpec::new(1.0, alpha, g.clone()).unwrap();
        let m = d.symbol(r).unwrap();
        prop_assert!(m >= 0.0 && m.is_finite());
        if r > 0.0 {
            prop_assert!((m - r.powf(alpha) / g.eval(r)).abs() <= 1e-12 * m.max(1.0));
        }
    }

    #[test]
    fn osgood_primitive_is_increasing(g in g_strategy(), a in 3.0..1e12f64, b in 3.0..1e12f64) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (flo, fhi) = (osgood_primitive(&g, lo).unwrap(), osgood_primitive(&g, hi).unwrap());
        prop_assert!(flo >= 0.0 && flo <= fhi + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn transform_round_trip(grid in grid_strategy(), seed in any::<u64>()) {
        let f = random_full_field(&grid, &mut ChaCha8Rng::seed_from_u64(seed));
        let back = SpectralField::forward_transform(&grid, &f.physical()).unwrap();
        let err = back.axpy(-1.0, &f).unwrap().max_abs_coeff();
        prop_assert!(err <= 1e-14 * f.max_abs_coeff().max(1.0));
    }

    #[test]
    fn leray_is_an_idempotent_projection(grid in grid_strategy(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let comps = (0..grid.dim()).map(|_| random_dealiased_field(&grid, &mut rng)).collect();
        let v = VectorField::new(comps).unwrap();
        let p = v.leray_project();
        prop_assert!(p.is_solenoidal());
        let pp = p.leray_project();
        prop_assert!(pp.axpy(-1.0, &p).unwrap().l2_norm() <= 1e-14 * p.l2_norm().max(1.0));
        prop_assert!(p.l2_norm() <= v.l2_norm() * (1.0 + 1e-14));
    }

    #[test]
    fn nonlinearity_conserves_energy(grid in grid_strategy(), seed in any::<u64>(), g in g_strategy()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let state = SolutionPair::new(solenoidal(&grid, &mut rng), solenoidal(&grid, &mut rng), 0.0)
            .unwrap()
            .cleaned();
        let params = SystemParams::new(
            grid.dim(),
            DissipationSpec::new(0.1, 2.0, g).unwrap(),
            DissipationSpec::none(2.0),
        )
        .unwrap();
        let (flux, rate) = energy_flux_identity(&state, &params).unwrap();
        let scale = state.energy() * (state.u.gradient_sq_norm() + state.b.gradient_sq_norm()).sqrt();
        prop_assert!(flux.abs() <= 1e-12 * scale.max(1.0), "flux {flux} vs scale {scale}");
        prop_assert!(rate >= 0.0);
    }
}
