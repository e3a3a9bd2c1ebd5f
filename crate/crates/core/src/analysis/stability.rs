use std::f64::consts::FRAC_PI_2;

use nalgebra::{SMatrix, Schur};
use serde::Serialize;

use super::equilibrium::EquilibriumPoint;
use crate::error::{Error, Result};
use crate::model::{rhs_uncontrolled, ModelParams, State8, DIM};

/// Half-width of the band around `απ/2` classed as marginal.
pub const MARGINAL_BAND: f64 = 1e-9;

pub type Jacobian = SMatrix<f64, DIM, DIM>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Stable,
    Unstable,
    Marginal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Eigenvalue {
    pub re: f64,
    pub im: f64,
}

impl Eigenvalue {
    pub fn arg(&self) -> f64 {
        self.im.atan2(self.re)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    pub verdict: Verdict,
    pub eigenvalues: Vec<Eigenvalue>,
    /// `min |arg λ_i|` over the spectrum.
    pub min_abs_arg: f64,
    /// `απ/2`.
    pub threshold: f64,
}

/// Central-difference Jacobian of the uncontrolled right-hand side, step
/// `1e-6·max(|x_k|, 1)` in component `k`.
pub fn jacobian(state: &State8, params: &ModelParams) -> Result<Jacobian> {
    let x = state.to_array();
    let mut j = Jacobian::zeros();
    for k in 0..DIM {
        let h = 1e-6 * x[k].abs().max(1.0);
        let mut plus = x;
        let mut minus = x;
        plus[k] += h;
        minus[k] -= h;
        let fp = rhs_uncontrolled(0.0, &State8::from_array(plus), params)?;
        let fm = rhs_uncontrolled(0.0, &State8::from_array(minus), params)?;
        for i in 0..DIM {
            j[(i, k)] = (fp[i] - fm[i]) / (plus[k] - minus[k]);
        }
    }
    Ok(j)
}

/// Classifies `point` with the fractional-order criterion: asymptotically
/// stable iff every Jacobian eigenvalue has `|arg λ| > απ/2`.
pub fn stability_check(point: &EquilibriumPoint, params: &ModelParams) -> Result<StabilityReport> {
    params.validate()?;
    let j = jacobian(&point.state, params)?;
    let schur = Schur::try_new(j, 1e-15, 100_000).ok_or_else(|| {
        Error::Numerical("eigenvalue iteration for the Jacobian did not converge".into())
    })?;
    let eigenvalues: Vec<Eigenvalue> = schur
        .complex_eigenvalues()
        .iter()
        .map(|z| Eigenvalue { re: z.re, im: z.im })
        .collect();
    if eigenvalues
        .iter()
        .any(|e| !e.re.is_finite() || !e.im.is_finite())
    {
        return Err(Error::Numerical("Jacobian spectrum is not finite".into()));
    }
    let min_abs_arg = eigenvalues
        .iter()
        .map(|e| e.arg().abs())
        .fold(f64::INFINITY, f64::min);
    let threshold = params.alpha * FRAC_PI_2;
    let verdict = if (min_abs_arg - threshold).abs() <= MARGINAL_BAND {
        Verdict::Marginal
    } else if min_abs_arg > threshold {
        Verdict::Stable
    } else {
        Verdict::Unstable
    };
    Ok(StabilityReport {
        verdict,
        eigenvalues,
        min_abs_arg,
        threshold,
    })
}
