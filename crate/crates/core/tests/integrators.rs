mod common;

use common::*;
use fracebola::analysis::mittag_leffler;
use fracebola::integrators::{FnSystem, IntegratorConfig, Solver};
use fracebola::model::{ControlBounds, ControlledModel, EbolaModel, ModelParams, State8};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn rkf45_error_estimates_stay_within_bounds() {
    let p = ModelParams::default();
    let tr = Solver::Rkf45(IntegratorConfig::default())
        .solve(
            &EbolaModel { params: p },
            seeded_state(&p).to_array(),
            0.0,
            100.0,
            1.0,
        )
        .unwrap();
    assert_eq!(tr.step_checks.len(), tr.accepted);
    assert!(tr.step_checks.iter().all(|c| c.error <= c.bound));
}

#[test]
fn abm_converges_towards_mittag_leffler() {
    let sys = FnSystem(|_t: f64, y: &[f64; 1]| Ok([-y[0]]));
    for alpha in [0.75, 0.85, 0.95] {
        let exact = mittag_leffler(alpha, 1.0, -(2f64.powf(alpha))).unwrap();
        let err = |n| {
            let y = Solver::Abm { n_steps: n }
                .solve(&sys, [1.0], 0.0, 2.0, alpha)
                .unwrap();
            (y.final_state()[0] - exact).abs()
        };
        let (coarse, fine) = (err(200), err(800));
        assert!(fine < coarse, "alpha {alpha}: {coarse} -> {fine}");
        assert!(fine < 1e-4, "alpha {alpha}: {fine}");
    }
}

#[test]
fn abm_at_unit_order_matches_rk4() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..3 {
        let p = ModelParams {
            alpha: 1.0,
            ..with_r0(draw_params(&mut rng), 2.0)
        };
        let sys = EbolaModel { params: p };
        let y0 = seeded_state(&p).to_array();
        let reference = rk4_fixed(&sys, y0, 50.0, 1e-3);
        let abm = Solver::Abm { n_steps: 5000 }
            .solve(&sys, y0, 0.0, 50.0, 1.0)
            .unwrap();
        let got = abm.final_state();
        for k in 0..8 {
            assert!(
                (got[k] - reference[k]).abs() <= 1e-3 * reference[k].abs(),
                "{k}"
            );
        }
    }
}

#[test]
fn fractional_order_slows_the_outbreak() {
    let p = with_r0(ModelParams::default(), 3.0);
    let y0 = seeded_state(&p).to_array();
    let peak = |alpha: f64| {
        let tr = Solver::Abm { n_steps: 2000 }
            .solve(&EbolaModel { params: p }, y0, 0.0, 200.0, alpha)
            .unwrap();
        tr.states
            .iter()
            .zip(&tr.times)
            .map(|(y, t)| (State8::from_array(*y).infected(), *t))
            .fold((0.0, 0.0), |a, b| if b.0 > a.0 { b } else { a })
    };
    let (_, t_int) = peak(1.0);
    let (_, t_frac) = peak(0.8);
    assert!(t_frac > t_int, "{t_frac} vs {t_int}");
}

fn params_strategy() -> impl Strategy<Value = (ModelParams, f64, u64)> {
    (any::<u64>(), 0.2f64..5.0, 0.75f64..=1.0).prop_map(|(seed, r0, alpha)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = ModelParams {
            alpha,
            ..with_r0(draw_params(&mut rng), r0)
        };
        (p, r0, seed)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn trajectories_stay_admissible((p, _r0, seed) in params_strategy(), controlled in any::<bool>(), abm in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabc);
        let bounds = ControlBounds::default();
        let u = random_controls(&mut rng, &bounds);
        let y0 = seeded_state(&p).to_array();
        let solver = if abm { Solver::Abm { n_steps: 500 } } else { Solver::Rkf45(IntegratorConfig::default()) };
        let tr = if controlled {
            let sys = ControlledModel { params: p, bounds, control: move |_t: f64| u };
            solver.solve(&sys, y0, 0.0, 60.0, p.alpha)
        } else {
            solver.solve(&EbolaModel { params: p }, y0, 0.0, 60.0, p.alpha)
        }
        .unwrap();
        prop_assert!(tr.min_component >= -1e-9);
        let bound = State8::from_array(y0).living().max(p.carrying_capacity()) * (1.0 + 1e-6);
        for y in &tr.states {
            prop_assert!(y.iter().all(|v| *v >= 0.0));
            prop_assert!(State8::from_array(*y).living() <= bound);
        }
    }
}
