//! Time-stepping engines and the trajectory container they fill.
//!
//! [`rkf45_solve`] is the adaptive Runge–Kutta–Fehlberg 4(5) scheme for
//! integer-order runs; [`abm_fractional_solve`] is the full-memory fractional
//! Adams–Bashforth–Moulton predictor–corrector for Caputo order `0 < α ≤ 1`.

mod abm;
mod rkf45;
mod trajectory;

pub use abm::abm_fractional_solve;
pub use rkf45::rkf45_solve;
pub use trajectory::{write_rows, IntegratorKind, StepCheck, Trajectory};

use serde::{Deserialize, Serialize};

use crate::error::{Error, FailureKind, Result};

/// A system `D y = f(t, y)` of fixed dimension.
pub trait OdeSystem<const N: usize> {
    fn rhs(&self, t: f64, y: &[f64; N]) -> Result<[f64; N]>;

    /// Hook applied to every accepted state before it is stored. The default
    /// leaves the state untouched; model systems clip round-off negatives and
    /// return `Err((component, value))` for genuine negativity.
    fn admit(&self, _y: &mut [f64; N]) -> std::result::Result<(), (usize, f64)> {
        Ok(())
    }
}

/// Adapter turning a plain closure into an [`OdeSystem`].
pub struct FnSystem<F>(pub F);

impl<const N: usize, F> OdeSystem<N> for FnSystem<F>
where
    F: Fn(f64, &[f64; N]) -> Result<[f64; N]>,
{
    fn rhs(&self, t: f64, y: &[f64; N]) -> Result<[f64; N]> {
        (self.0)(t, y)
    }
}

/// Adaptive step-size settings for [`rkf45_solve`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub h_min: f64,
    pub h_max: f64,
    pub h_init: f64,
    pub safety: f64,
    pub error_exponent: f64,
    pub max_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-6,
            abs_tol: 1e-8,
            h_min: 1e-8,
            h_max: 0.1,
            h_init: 0.01,
            safety: 0.9,
            error_exponent: 0.2,
            max_steps: 10_000_000,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |name: &'static str, why: &str| Err(Error::param(name, why));
        if !(self.rel_tol > 0.0) {
            return bad("rel_tol", "must be positive");
        }
        if !(self.abs_tol > 0.0) {
            return bad("abs_tol", "must be positive");
        }
        if !(self.h_min > 0.0 && self.h_min <= self.h_init && self.h_init <= self.h_max) {
            return bad("h_init", "need 0 < h_min <= h_init <= h_max");
        }
        if !(self.safety > 0.0 && self.safety <= 1.0) {
            return bad("safety", "must lie in (0, 1]");
        }
        if !(self.error_exponent > 0.0) {
            return bad("error_exponent", "must be positive");
        }
        if self.max_steps == 0 {
            return bad("max_steps", "must be positive");
        }
        Ok(())
    }
}

/// Integration engine selection shared by the higher-level drivers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Solver {
    /// Adaptive RKF45 on the integer-order system (the order is ignored).
    Rkf45(IntegratorConfig),
    /// Fractional ABM on a uniform grid of `n_steps` intervals.
    Abm { n_steps: usize },
}

impl Solver {
    pub fn kind(&self) -> IntegratorKind {
        match self {
            Solver::Rkf45(_) => IntegratorKind::Rkf45,
            Solver::Abm { .. } => IntegratorKind::Abm,
        }
    }

    pub fn solve<const N: usize, S: OdeSystem<N>>(
        &self,
        system: &S,
        y0: [f64; N],
        t0: f64,
        t_end: f64,
        alpha: f64,
    ) -> Result<Trajectory<N>> {
        let out = match *self {
            Solver::Rkf45(cfg) => rkf45_solve(system, y0, t0, t_end, &cfg),
            Solver::Abm { n_steps } => abm_fractional_solve(system, y0, t0, t_end, alpha, n_steps),
        };
        out.map_err(Error::from)
    }
}

/// Error type of the engines: either the request was invalid, or the run
/// failed part-way and the steps taken so far are returned.
#[derive(Debug, Clone)]
pub enum SolveError<const N: usize> {
    Invalid(String),
    Failed {
        kind: FailureKind,
        partial: Box<Trajectory<N>>,
    },
}

impl<const N: usize> SolveError<N> {
    pub fn partial(&self) -> Option<&Trajectory<N>> {
        match self {
            SolveError::Invalid(_) => None,
            SolveError::Failed { partial, .. } => Some(partial),
        }
    }
}

impl<const N: usize> From<SolveError<N>> for Error {
    fn from(e: SolveError<N>) -> Self {
        match e {
            SolveError::Invalid(msg) => Error::Domain(msg),
            SolveError::Failed { kind, partial } => Error::Integration {
                t: partial.t_end(),
                kind,
            },
        }
    }
}

pub(crate) fn check_interval<const N: usize>(
    y0: &[f64; N],
    t0: f64,
    t_end: f64,
) -> std::result::Result<(), SolveError<N>> {
    if !(t0.is_finite() && t_end.is_finite() && t_end > t0) {
        return Err(SolveError::Invalid(format!(
            "integration interval [{t0}, {t_end}] is empty or not finite"
        )));
    }
    if y0.iter().any(|x| !x.is_finite()) {
        return Err(SolveError::Invalid("initial state is not finite".into()));
    }
    Ok(())
}

pub(crate) fn norm2<const N: usize>(y: &[f64; N]) -> f64 {
    y.iter().map(|x| x * x).sum::<f64>().sqrt()
}
