use serde::Serialize;

use super::ngm::r0_closed_form;
use crate::error::{Error, Result};
use crate::model::{ModelParams, State8};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EquilibriumKind {
    DiseaseFree,
    Endemic,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquilibriumPoint {
    pub kind: EquilibriumKind,
    pub state: State8,
    /// Force of infection at the equilibrium; zero for the disease-free one.
    pub lambda_star: f64,
}

pub fn disease_free_equilibrium(params: &ModelParams) -> EquilibriumPoint {
    let q1 = params.rates().q1;
    let denom = params.mu * (q1 + params.v);
    let state = State8 {
        s: params.recruitment * q1 / denom,
        v: params.recruitment * params.v / denom,
        ..State8::from_array([0.0; 8])
    };
    EquilibriumPoint {
        kind: EquilibriumKind::DiseaseFree,
        state,
        lambda_star: 0.0,
    }
}

/// `M` in `λ* = M·E*/N*`: the infectiousness generated per exposed individual
/// at steady state.
fn infectiousness_per_exposed(params: &ModelParams) -> f64 {
    let q = params.rates();
    let ModelParams {
        beta,
        sigma,
        p,
        eta_a,
        eta_d,
        delta_s,
        delta_h,
        h_s,
        ..
    } = *params;
    beta * sigma
        * (p / q.q3
            + eta_a * (1.0 - p) / q.q4
            + eta_d * p / (q.q3 * q.q6) * (delta_s + delta_h * h_s / q.q5))
}

/// Steady state of every compartment given a trial force of infection `λ`.
fn state_for_lambda(params: &ModelParams, lambda: f64) -> State8 {
    let q = params.rates();
    let eps1 = 1.0 - params.epsilon;
    let delta = (params.omega + params.mu + eps1 * lambda) * (params.mu + params.v + lambda)
        - params.omega * params.v;
    let s = params.recruitment * (q.q1 + eps1 * lambda) / delta;
    let v = params.recruitment * params.v / delta;
    let e = lambda * (s + eps1 * v) / q.q2;
    let ps = params.p * params.sigma;
    let i_s = ps * e / q.q3;
    let i_a = (1.0 - params.p) * params.sigma * e / q.q4;
    let h = ps * params.h_s * e / (q.q3 * q.q5);
    let d = ps / (q.q3 * q.q6) * (params.delta_s + params.delta_h * params.h_s / q.q5) * e;
    let r = (params.gamma_s * i_s + params.gamma_a * i_a + params.gamma_h * h) / params.mu;
    State8 {
        s,
        v,
        e,
        i_s,
        i_a,
        h,
        d,
        r,
    }
}

/// Residual `g(λ)` of the scalar equilibrium condition: zero exactly when the
/// force of infection implied by the steady state at `λ` equals `λ`. The
/// living population is taken from that steady state, so `g(0) + 1 = R0`.
pub fn lambda_residual(params: &ModelParams, lambda: f64) -> f64 {
    let st = state_for_lambda(params, lambda);
    let eps1 = 1.0 - params.epsilon;
    infectiousness_per_exposed(params) * (st.s + eps1 * st.v) / (params.rates().q2 * st.living())
        - 1.0
}

/// Positive equilibrium, or `None` when `R0 ≤ 1`.
pub fn endemic_equilibrium(params: &ModelParams) -> Result<Option<EquilibriumPoint>> {
    params.validate()?;
    let r0 = r0_closed_form(params);
    if r0 <= 1.0 {
        return Ok(None);
    }
    let q2 = params.rates().q2;
    let cap = 1e6 * q2;
    let mut hi = q2;
    while lambda_residual(params, hi) > 0.0 {
        if hi >= cap {
            return Err(Error::Numerical(format!(
                "no sign change of the equilibrium condition in [0, {cap:e}] (R0 = {r0})"
            )));
        }
        hi = (hi * 10.0).min(cap);
    }
    let mut lo = 0.0;
    let mut g_lo = r0 - 1.0;
    let mut g_hi = lambda_residual(params, hi);
    // Illinois-modified regula falsi, falling back to bisection
    let mut side = 0i8;
    for _ in 0..400 {
        let mut mid = (lo * g_hi - hi * g_lo) / (g_hi - g_lo);
        if !(mid > lo && mid < hi) {
            mid = 0.5 * (lo + hi);
        }
        let g = lambda_residual(params, mid);
        if g == 0.0 || hi - lo <= 4.0 * f64::EPSILON * hi {
            lo = mid;
            hi = mid;
            break;
        }
        if g > 0.0 {
            lo = mid;
            g_lo = g;
            if side == 1 {
                g_hi *= 0.5;
            }
            side = 1;
        } else {
            hi = mid;
            g_hi = g;
            if side == -1 {
                g_lo *= 0.5;
            }
            side = -1;
        }
        if g.abs() < 1e-15 {
            break;
        }
    }
    let lambda = if lambda_residual(params, lo).abs() <= lambda_residual(params, hi).abs() {
        lo
    } else {
        hi
    };
    Ok(Some(EquilibriumPoint {
        kind: EquilibriumKind::Endemic,
        state: state_for_lambda(params, lambda),
        lambda_star: lambda,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{force_of_infection, rhs_uncontrolled};

    fn at_r0(target: f64) -> ModelParams {
        let mut p = ModelParams::default();
        p.beta *= target / r0_closed_form(&p);
        p
    }

    fn max_residual(state: &State8, p: &ModelParams) -> f64 {
        rhs_uncontrolled(0.0, state, p)
            .unwrap()
            .iter()
            .fold(0.0, |m, x| m.max(x.abs()))
    }

    #[test]
    fn dfe_is_steady() {
        let p = ModelParams::default();
        let dfe = disease_free_equilibrium(&p);
        assert!(max_residual(&dfe.state, &p) < 1e-10);
        let total = dfe.state.s + dfe.state.v;
        assert!((total - p.carrying_capacity()).abs() < 1e-9 * total);
    }

    #[test]
    fn dfe_without_vaccination() {
        let p = ModelParams {
            v: 0.0,
            ..Default::default()
        };
        let dfe = disease_free_equilibrium(&p);
        assert_eq!(dfe.state.v, 0.0);
        assert!((dfe.state.s - p.carrying_capacity()).abs() < 1e-9);
    }

    #[test]
    fn residual_at_zero_is_r0_minus_one() {
        for target in [0.4, 1.0, 2.5] {
            let p = at_r0(target);
            assert!((lambda_residual(&p, 0.0) + 1.0 - r0_closed_form(&p)).abs() < 1e-12);
        }
    }

    #[test]
    fn none_below_threshold() {
        assert!(endemic_equilibrium(&at_r0(0.9)).unwrap().is_none());
    }

    #[test]
    fn endemic_point_is_steady_and_positive() {
        let p = at_r0(2.0);
        let eq = endemic_equilibrium(&p).unwrap().unwrap();
        assert!(eq.state.to_array().iter().all(|&x| x > 0.0));
        assert!(max_residual(&eq.state, &p) < 1e-8 * p.carrying_capacity());
        let lam = force_of_infection(&eq.state, &p).unwrap();
        assert!((lam - eq.lambda_star).abs() < 1e-12 * lam);
    }
}
