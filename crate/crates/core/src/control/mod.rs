//! Four-control optimal intervention problem: Hamiltonian, adjoint system,
//! projected control characterisation, forward–backward sweep, and
//! constant-control strategy comparisons.

mod hamiltonian;
mod strategy;
mod sweep;

pub use hamiltonian::{adjoint_rhs, hamiltonian, project_controls, running_cost};
pub use strategy::{
    compare_strategies, run_strategy, Strategy, StrategyComparison, StrategyOutcome,
};
pub use sweep::{forward_backward_sweep, IterationRecord, SweepConfig, SweepResult};

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrators::{write_rows, Trajectory};
use crate::model::{ControlBounds, ControlVector, State8, DIM};

/// Objective weights: `a` on the burden `(Is, Ia, H, D)`, `b` on the
/// squared controls `(u1, u2, u3, u4)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CostWeights {
    #[serde(rename = "A")]
    pub a: [f64; 4],
    #[serde(rename = "B")]
    pub b: [f64; 4],
}

impl Default for CostWeights {
    fn default() -> Self {
        Self {
            a: [1.0; 4],
            b: [10.0, 50.0, 25.0, 4.0],
        }
    }
}

impl CostWeights {
    pub fn validate(&self) -> Result<()> {
        if self.a.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
            return Err(Error::param(
                "A",
                "burden weights must be finite and non-negative",
            ));
        }
        if self.b.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
            return Err(Error::param(
                "B",
                "control weights must be finite and positive",
            ));
        }
        Ok(())
    }
}

/// Piecewise-linear control law on a uniform grid over `[0, T]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlSchedule {
    pub times: Vec<f64>,
    pub controls: Vec<ControlVector>,
    pub bounds: ControlBounds,
}

impl ControlSchedule {
    pub fn constant(
        t_final: f64,
        nodes: usize,
        u: ControlVector,
        bounds: ControlBounds,
    ) -> Result<Self> {
        let times = uniform_grid(t_final, nodes)?;
        bounds.check(&u)?;
        Ok(Self {
            controls: vec![u; times.len()],
            times,
            bounds,
        })
    }

    pub fn t_final(&self) -> f64 {
        *self.times.last().expect("schedule has nodes")
    }

    /// Linear interpolation, clamped to the grid.
    pub fn at(&self, t: f64) -> ControlVector {
        let n = self.times.len();
        if t <= self.times[0] {
            return self.controls[0];
        }
        if t >= self.times[n - 1] {
            return self.controls[n - 1];
        }
        let i = self.times.partition_point(|&x| x <= t);
        let (t0, t1) = (self.times[i - 1], self.times[i]);
        let s = (t - t0) / (t1 - t0);
        let (a, b) = (self.controls[i - 1].to_array(), self.controls[i].to_array());
        ControlVector::from_array(std::array::from_fn(|k| a[k] + s * (b[k] - a[k])))
    }

    /// Every node inside the admissible box.
    pub fn validate(&self) -> Result<()> {
        if self.times.len() != self.controls.len() {
            return Err(Error::GridMismatch(format!(
                "{} times for {} control nodes",
                self.times.len(),
                self.controls.len()
            )));
        }
        self.controls.iter().try_for_each(|u| self.bounds.check(u))
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        let rows: Vec<[f64; 4]> = self.controls.iter().map(|u| u.to_array()).collect();
        write_rows(&mut w, &["u1", "u2", "u3", "u4"], &self.times, &rows)
    }
}

/// Adjoint values on the sweep grid.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjointTrajectory {
    pub times: Vec<f64>,
    pub values: Vec<[f64; DIM]>,
}

pub const ADJOINT_HEADER: [&str; DIM] = [
    "lambda_S",
    "lambda_V",
    "lambda_E",
    "lambda_Is",
    "lambda_Ia",
    "lambda_H",
    "lambda_D",
    "lambda_R",
];

impl AdjointTrajectory {
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        write_rows(&mut w, &ADJOINT_HEADER, &self.times, &self.values)
    }
}

pub fn uniform_grid(t_final: f64, nodes: usize) -> Result<Vec<f64>> {
    if !(t_final > 0.0 && t_final.is_finite()) {
        return Err(Error::param(
            "T",
            format!("horizon must be positive and finite, got {t_final}"),
        ));
    }
    if nodes < 2 {
        return Err(Error::param("nodes", "need at least two grid nodes"));
    }
    let dt = t_final / (nodes - 1) as f64;
    Ok((0..nodes)
        .map(|i| {
            if i + 1 == nodes {
                t_final
            } else {
                i as f64 * dt
            }
        })
        .collect())
}

/// Trapezoidal quadrature of the running cost on the schedule grid. The
/// trajectory must span the same interval; it is sampled by its dense output.
pub fn objective(traj: &Trajectory<DIM>, sched: &ControlSchedule, w: &CostWeights) -> Result<f64> {
    let (t0, t1) = (sched.times[0], sched.t_final());
    let tol = 1e-12 * t1.abs().max(1.0);
    if (traj.t0() - t0).abs() > tol || (traj.t_end() - t1).abs() > tol {
        return Err(Error::GridMismatch(format!(
            "trajectory covers [{}, {}], schedule covers [{t0}, {t1}]",
            traj.t0(),
            traj.t_end()
        )));
    }
    let values: Vec<f64> = sched
        .times
        .iter()
        .zip(&sched.controls)
        .map(|(&t, u)| running_cost(&State8::from_array(traj.interpolate(t)), u, w))
        .collect();
    Ok(trapezoid(&sched.times, &values))
}

pub(crate) fn trapezoid(times: &[f64], values: &[f64]) -> f64 {
    times
        .windows(2)
        .zip(values.windows(2))
        .map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0] + v[1]))
        .sum()
}

/// Outcome metrics shared by sweeps and fixed strategies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OutcomeSummary {
    /// `max(E + Is + Ia + H)` over the run.
    pub peak_infected: f64,
    pub peak_time: f64,
    /// `D(T) + ∫ (u4 + μ_d) D dt`: everyone who died of the disease.
    pub deaths: f64,
    /// Objective value.
    pub cost: f64,
}

pub(crate) fn summarize<F: Fn(f64) -> ControlVector>(
    times: &[f64],
    states: &[[f64; DIM]],
    control: F,
    mu_d: f64,
    cost: f64,
) -> OutcomeSummary {
    let mut peak_infected = f64::NEG_INFINITY;
    let mut peak_time = times[0];
    for (&t, y) in times.iter().zip(states) {
        let infected = State8::from_array(*y).infected();
        if infected > peak_infected {
            peak_infected = infected;
            peak_time = t;
        }
    }
    let outflow: Vec<f64> = times
        .iter()
        .zip(states)
        .map(|(&t, y)| (control(t).u4 + mu_d) * y[crate::model::idx::D])
        .collect();
    let deaths =
        states.last().expect("non-empty run")[crate::model::idx::D] + trapezoid(times, &outflow);
    OutcomeSummary {
        peak_infected,
        peak_time,
        deaths,
        cost,
    }
}
