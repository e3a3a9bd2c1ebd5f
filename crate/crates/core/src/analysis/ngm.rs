use nalgebra::{Matrix5, Schur};

use crate::error::{Error, Result};
use crate::model::ModelParams;

/// Next-generation decomposition over the infected subsystem
/// `(E, Is, Ia, H, D)`, linearised at the disease-free equilibrium.
#[derive(Debug, Clone, PartialEq)]
pub struct NGMatrices {
    /// New-infection terms; only the `E` row is nonzero.
    pub f: Matrix5<f64>,
    /// Transitions between and out of the infected compartments.
    pub v: Matrix5<f64>,
    /// Susceptibility factor `(S* + (1−ε)V*) / (Λ/μ)`.
    pub psi: f64,
}

/// `(S* + (1−ε)V*) / (Λ/μ)` at the disease-free equilibrium.
pub fn susceptibility_factor(params: &ModelParams) -> f64 {
    let q1 = params.rates().q1;
    let cap = params.carrying_capacity();
    let denom = params.mu * (q1 + params.v);
    let s = params.recruitment * q1 / denom;
    let v = params.recruitment * params.v / denom;
    (s + (1.0 - params.epsilon) * v) / cap
}

pub fn next_generation_matrices(params: &ModelParams) -> NGMatrices {
    let q = params.rates();
    let psi = susceptibility_factor(params);
    let b = params.beta * psi;
    let mut f = Matrix5::zeros();
    f[(0, 1)] = b;
    f[(0, 2)] = b * params.eta_a;
    f[(0, 4)] = b * params.eta_d;

    let sigma = params.sigma;
    #[rustfmt::skip]
    let v = Matrix5::new(
        q.q2,                      0.0,            0.0,  0.0,             0.0,
        -params.p * sigma,         q.q3,           0.0,  0.0,             0.0,
        -(1.0 - params.p) * sigma, 0.0,            q.q4, 0.0,             0.0,
        0.0,                       -params.h_s,    0.0,  q.q5,            0.0,
        0.0,                       -params.delta_s, 0.0, -params.delta_h, q.q6,
    );
    NGMatrices { f, v, psi }
}

/// Basic reproduction number from its closed form.
pub fn r0_closed_form(params: &ModelParams) -> f64 {
    let q = params.rates();
    let ModelParams {
        beta,
        p,
        sigma,
        eta_a,
        eta_d,
        delta_s,
        delta_h,
        h_s,
        ..
    } = *params;
    let psi = susceptibility_factor(params);
    let symptomatic = (p * sigma / q.q2)
        * (1.0 / q.q3 + eta_d * (delta_s * q.q5 + delta_h * h_s) / (q.q3 * q.q5 * q.q6));
    let asymptomatic = eta_a * (1.0 - p) * sigma / (q.q2 * q.q4);
    beta * psi * (symptomatic + asymptomatic)
}

/// Basic reproduction number as the spectral radius of `F V⁻¹`.
pub fn r0_spectral(params: &ModelParams) -> Result<f64> {
    let m = next_generation_matrices(params);
    let v_inv =
        m.v.try_inverse()
            .ok_or_else(|| Error::Numerical("transition matrix V is singular".into()))?;
    let k = m.f * v_inv;
    if k.amax() == 0.0 {
        return Ok(0.0);
    }
    let schur = Schur::try_new(k, f64::EPSILON, 10_000).ok_or_else(|| {
        Error::Numerical("eigenvalue iteration for F·V⁻¹ did not converge".into())
    })?;
    Ok(schur
        .complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nominal() -> ModelParams {
        ModelParams::default()
    }

    #[test]
    fn closed_form_matches_spectral_radius() {
        let p = nominal();
        let a = r0_closed_form(&p);
        let b = r0_spectral(&p).unwrap();
        assert!(((a - b) / a).abs() < 1e-10, "{a} vs {b}");
    }

    #[test]
    fn zero_transmission_or_progression() {
        let mut p = nominal();
        p.beta = 0.0;
        assert_eq!(r0_closed_form(&p), 0.0);
        assert_eq!(r0_spectral(&p).unwrap(), 0.0);
        let mut p = nominal();
        p.sigma = 0.0;
        assert_eq!(r0_closed_form(&p), 0.0);
        assert!(r0_spectral(&p).unwrap().abs() < 1e-15);
    }

    #[test]
    fn linear_in_beta() {
        let mut p = nominal();
        let r = r0_closed_form(&p);
        p.beta *= 2.0;
        assert_eq!(r0_closed_form(&p), 2.0 * r);
    }

    #[test]
    fn single_infection_row() {
        let m = next_generation_matrices(&nominal());
        for i in 1..5 {
            for j in 0..5 {
                assert_eq!(m.f[(i, j)], 0.0);
            }
        }
        assert!(m.v.determinant() > 0.0);
    }

    #[test]
    fn no_vaccination_means_full_susceptibility() {
        let mut p = nominal();
        p.v = 0.0;
        assert!((susceptibility_factor(&p) - 1.0).abs() < 1e-15);
    }
}
