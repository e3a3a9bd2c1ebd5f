#![allow(dead_code)]

use fracebola::analysis::r0_closed_form;
use fracebola::control::{hamiltonian, CostWeights};
use fracebola::integrators::OdeSystem;
use fracebola::model::{ControlBounds, ControlVector, ModelParams, Param, State8, DIM};
use rand::Rng;

/// Published draw ranges; the last two parameters have none, so the brackets are our own.
pub const RANGES: [(Param, f64, f64); 17] = [
    (Param::Beta, 0.2, 0.4),
    (Param::EtaD, 0.5, 0.9),
    (Param::EtaA, 0.3, 0.7),
    (Param::Sigma, 0.05, 0.15),
    (Param::P, 0.5, 0.8),
    (Param::GammaS, 0.05, 0.1),
    (Param::GammaA, 0.07, 0.12),
    (Param::DeltaS, 0.05, 0.15),
    (Param::DeltaH, 0.03, 0.09),
    (Param::HS, 0.2, 0.4),
    (Param::Lambda, 100.0, 1000.0),
    (Param::V, 0.005, 0.08),
    (Param::Epsilon, 0.85, 0.95),
    (Param::Omega, 0.0027, 0.0037),
    (Param::Alpha, 0.75, 0.95),
    // no published value
    (Param::GammaH, 0.05, 0.2),
    (Param::MuD, 0.03, 0.5),
];

pub fn draw_params<R: Rng>(rng: &mut R) -> ModelParams {
    let mut p = ModelParams::default();
    for (param, lo, hi) in RANGES {
        param.set(&mut p, rng.random_range(lo..=hi));
    }
    p
}

/// `p` with β rescaled so that the closed-form R0 equals `target`.
pub fn with_r0(mut p: ModelParams, target: f64) -> ModelParams {
    p.beta *= target / r0_closed_form(&p);
    p
}

pub fn seeded_state(p: &ModelParams) -> State8 {
    fracebola::scenario::default_initial_state(p)
}

/// Classical fixed-step RK4, final state only.
pub fn rk4_fixed<const N: usize, S: OdeSystem<N>>(
    sys: &S,
    y0: [f64; N],
    t_end: f64,
    h: f64,
) -> [f64; N] {
    let n = (t_end / h).round() as usize;
    let h = t_end / n as f64;
    let mut y = y0;
    let axpy = |y: &[f64; N], a: f64, k: &[f64; N]| -> [f64; N] {
        std::array::from_fn(|i| y[i] + a * k[i])
    };
    for i in 0..n {
        let t = i as f64 * h;
        let k1 = sys.rhs(t, &y).unwrap();
        let k2 = sys.rhs(t + 0.5 * h, &axpy(&y, 0.5 * h, &k1)).unwrap();
        let k3 = sys.rhs(t + 0.5 * h, &axpy(&y, 0.5 * h, &k2)).unwrap();
        let k4 = sys.rhs(t + h, &axpy(&y, h, &k3)).unwrap();
        for j in 0..N {
            y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
    }
    y
}

/// `∂H/∂x` by Richardson-extrapolated central differences of the
/// numerically assembled Hamiltonian.
pub fn hamiltonian_gradient_fd(
    x: &State8,
    u: &ControlVector,
    lam: &[f64; DIM],
    p: &ModelParams,
    w: &CostWeights,
) -> [f64; DIM] {
    let base = x.to_array();
    let h_at = |k: usize, dx: f64| {
        let mut y = base;
        y[k] += dx;
        hamiltonian(&State8::from_array(y), u, lam, p, w).unwrap()
    };
    std::array::from_fn(|k| {
        let h = 1e-2 * base[k].abs().max(1.0);
        let d1 = (h_at(k, h) - h_at(k, -h)) / (2.0 * h);
        let d2 = (h_at(k, h / 2.0) - h_at(k, -h / 2.0)) / h;
        (4.0 * d2 - d1) / 3.0
    })
}

pub fn random_state<R: Rng>(rng: &mut R) -> State8 {
    let s = rng.random_range(1e3..1e5);
    State8 {
        s,
        v: rng.random_range(0.0..s),
        e: rng.random_range(0.0..500.0),
        i_s: rng.random_range(0.0..500.0),
        i_a: rng.random_range(0.0..500.0),
        h: rng.random_range(0.0..500.0),
        d: rng.random_range(0.0..500.0),
        r: rng.random_range(0.0..1e4),
    }
}

pub fn random_adjoint<R: Rng>(rng: &mut R) -> [f64; DIM] {
    std::array::from_fn(|_| rng.random_range(-10.0..10.0))
}

pub fn random_controls<R: Rng>(rng: &mut R, b: &ControlBounds) -> ControlVector {
    ControlVector::from_array(b.to_array().map(|m| rng.random_range(0.0..=m)))
}

/// Sign of each in-scope index in the sensitivity table (Λ: no effect).
pub const TABLE_SIGNS: [(Param, i8); 16] = [
    (Param::Beta, 1),
    (Param::Sigma, 1),
    (Param::EtaD, 1),
    (Param::EtaA, 1),
    (Param::GammaS, -1),
    (Param::DeltaS, 1),
    (Param::Omega, 1),
    (Param::DeltaH, 1),
    (Param::Epsilon, -1),
    (Param::P, 1),
    (Param::V, -1),
    (Param::HS, -1),
    (Param::GammaA, -1),
    (Param::Mu, -1),
    (Param::MuD, -1),
    (Param::Lambda, 0),
];
