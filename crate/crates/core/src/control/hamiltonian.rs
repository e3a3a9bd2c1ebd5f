use super::CostWeights;
use crate::error::Result;
use crate::model::{controlled_unchecked, ControlBounds, ControlVector, ModelParams, State8, DIM};

/// `H = Σ A_i X_i + ½ Σ B_j u_j² + λ·f(x, u)` with `X = (Is, Ia, H, D)`.
pub fn hamiltonian(
    state: &State8,
    u: &ControlVector,
    adjoint: &[f64; DIM],
    params: &ModelParams,
    w: &CostWeights,
) -> Result<f64> {
    let f = controlled_unchecked(0.0, state, params, u)?;
    Ok(running_cost(state, u, w) + adjoint.iter().zip(&f).map(|(l, f)| l * f).sum::<f64>())
}

/// Integrand of the objective functional.
pub fn running_cost(state: &State8, u: &ControlVector, w: &CostWeights) -> f64 {
    let burden = [state.i_s, state.i_a, state.h, state.d];
    let u = u.to_array();
    (0..4)
        .map(|i| w.a[i] * burden[i] + 0.5 * w.b[i] * u[i] * u[i])
        .sum()
}

/// Adjoint dynamics `dλ/dt = −∂H/∂x`.
pub fn adjoint_rhs(
    _t: f64,
    adjoint: &[f64; DIM],
    state: &State8,
    u: &ControlVector,
    params: &ModelParams,
    w: &CostWeights,
) -> Result<[f64; DIM]> {
    let [l_s, l_v, l_e, l_is, l_ia, l_h, l_d, l_r] = *adjoint;
    let ModelParams {
        beta,
        eta_a,
        eta_d,
        sigma,
        p,
        gamma_s,
        gamma_a,
        gamma_h,
        delta_s,
        delta_h,
        mu,
        mu_d,
        epsilon,
        omega,
        ..
    } = *params;
    let q = params.rates();
    let State8 {
        s, v, i_s, i_a, d, ..
    } = *state;
    let n = state.living();
    if n.is_nan() || n <= 0.0 {
        return Err(crate::Error::Domain(format!(
            "living population must be positive, got {n}"
        )));
    }
    let infectious = i_s + eta_a * i_a + eta_d * d;
    let phi = 1.0 - u.u1;
    let force = beta * infectious / n;
    // infection terms of λ·f are force·g
    let g = phi * ((l_e - l_s) * s + (l_e - l_v) * (1.0 - epsilon) * v);
    // ∂force/∂x = β(∂I/∂x)/N − (force/N)(∂N/∂x)
    let dn = force / n;
    let df_living = -dn;
    let df_is = beta / n - dn;
    let df_ia = beta * eta_a / n - dn;
    let df_d = beta * eta_d / n;

    let h_s = u.u3;
    let dh = [
        -l_s * (u.u2 + mu) + l_v * u.u2 + force * phi * (l_e - l_s) + g * df_living,
        l_s * omega - l_v * q.q1 + force * phi * (1.0 - epsilon) * (l_e - l_v) + g * df_living,
        -l_e * q.q2 + l_is * p * sigma + l_ia * (1.0 - p) * sigma + g * df_living,
        w.a[0] - l_is * (gamma_s + delta_s + h_s + mu)
            + l_h * h_s
            + l_d * delta_s
            + l_r * gamma_s
            + g * df_is,
        w.a[1] - l_ia * q.q4 + l_r * gamma_a + g * df_ia,
        w.a[2] - l_h * q.q5 + l_d * delta_h + l_r * gamma_h + g * df_living,
        w.a[3] - l_d * (u.u4 + mu_d) + g * df_d,
        -l_r * mu + g * df_living,
    ];
    Ok(dh.map(|x| -x))
}

/// Pointwise minimiser of the Hamiltonian over the admissible box. `H` is
/// a separable convex quadratic in `u`, so clamping the stationary point is
/// exact.
pub fn project_controls(
    state: &State8,
    adjoint: &[f64; DIM],
    params: &ModelParams,
    w: &CostWeights,
    bounds: &ControlBounds,
) -> Result<ControlVector> {
    let [l_s, l_v, l_e, l_is, _, l_h, l_d, _] = *adjoint;
    let force = crate::model::force_of_infection(state, params)?;
    let raw = ControlVector {
        u1: force * ((l_e - l_s) * state.s + (l_e - l_v) * (1.0 - params.epsilon) * state.v)
            / w.b[0],
        u2: (l_s - l_v) * state.s / w.b[1],
        u3: (l_is - l_h) * state.i_s / w.b[2],
        u4: l_d * state.d / w.b[3],
    };
    Ok(bounds.clamp(raw))
}
