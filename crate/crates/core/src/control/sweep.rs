use serde::{Deserialize, Serialize};

use super::{
    adjoint_rhs, objective, project_controls, summarize, AdjointTrajectory, ControlSchedule,
    CostWeights, OutcomeSummary,
};
use crate::error::{Error, Result};
use crate::integrators::{OdeSystem, Solver, Trajectory};
use crate::model::{ControlBounds, ControlVector, ControlledModel, ModelParams, State8, DIM};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    /// Weight `ρ` of the new control in `u ← (1−ρ)u_old + ρ·u_new`.
    pub relaxation: f64,
    /// Convergence threshold on the bound-normalised max-norm control change.
    pub tol: f64,
    pub max_iter: usize,
    /// Grid nodes over `[0, T]`. Ignored with the fractional solver, whose
    /// own step grid is used.
    pub nodes: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            relaxation: 0.5,
            tol: 1e-3,
            max_iter: 100,
            nodes: 1001,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.relaxation > 0.0 && self.relaxation <= 1.0) {
            return Err(Error::param("relaxation", "must lie in (0, 1]"));
        }
        if !(self.tol > 0.0) {
            return Err(Error::param("tol", "must be positive"));
        }
        if self.max_iter == 0 {
            return Err(Error::param("max_iter", "must be positive"));
        }
        if self.nodes < 2 {
            return Err(Error::param("nodes", "need at least two grid nodes"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IterationRecord {
    pub iter: usize,
    /// Objective of the forward run made with this iteration's controls.
    #[serde(rename = "J")]
    pub j: f64,
    /// Bound-normalised max-norm distance between the projected and the
    /// current controls.
    pub delta_u: f64,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub converged: bool,
    pub iterations: usize,
    pub history: Vec<IterationRecord>,
    pub schedule: ControlSchedule,
    pub trajectory: Trajectory<DIM>,
    pub adjoint: AdjointTrajectory,
    pub summary: OutcomeSummary,
}

impl SweepResult {
    pub fn write_convergence_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "iter,J,delta_u")?;
        for r in &self.history {
            writeln!(w, "{},{:.16e},{:.16e}", r.iter, r.j, r.delta_u)?;
        }
        Ok(())
    }
}

/// Backward adjoint problem on the reversed clock `τ = T − t`.
struct ReversedAdjoint<'a> {
    params: &'a ModelParams,
    weights: &'a CostWeights,
    forward: &'a Trajectory<DIM>,
    schedule: &'a ControlSchedule,
    t_final: f64,
}

impl OdeSystem<DIM> for ReversedAdjoint<'_> {
    fn rhs(&self, tau: f64, lam: &[f64; DIM]) -> Result<[f64; DIM]> {
        let t = self.t_final - tau;
        let x = State8::from_array(self.forward.interpolate(t));
        let u = self.schedule.at(t);
        let d = adjoint_rhs(t, lam, &x, &u, self.params, self.weights)?;
        Ok(d.map(|v| -v))
    }
}

fn forward(
    params: &ModelParams,
    schedule: &ControlSchedule,
    y0: &State8,
    solver: &Solver,
) -> Result<Trajectory<DIM>> {
    let system = ControlledModel {
        params: *params,
        bounds: schedule.bounds,
        control: |t: f64| schedule.at(t),
    };
    solver.solve(
        &system,
        y0.to_array(),
        0.0,
        schedule.t_final(),
        params.alpha,
    )
}

fn backward(
    params: &ModelParams,
    weights: &CostWeights,
    schedule: &ControlSchedule,
    fwd: &Trajectory<DIM>,
    solver: &Solver,
) -> Result<AdjointTrajectory> {
    let t_final = schedule.t_final();
    let system = ReversedAdjoint {
        params,
        weights,
        forward: fwd,
        schedule,
        t_final,
    };
    let rev = solver.solve(&system, [0.0; DIM], 0.0, t_final, params.alpha)?;
    let values = schedule
        .times
        .iter()
        .map(|&t| {
            if t == t_final {
                [0.0; DIM]
            } else {
                rev.interpolate(t_final - t)
            }
        })
        .collect();
    Ok(AdjointTrajectory {
        times: schedule.times.clone(),
        values,
    })
}

/// Forward–backward sweep for the four-control problem.
///
/// Starts from the baseline controls `(0, v, h_s, 0)`. Each iteration solves
/// the state forward, the adjoint backward from `λ(T) = 0`, projects the
/// Hamiltonian minimiser onto the bounds node by node, and relaxes. When the
/// change falls below `cfg.tol` the projected controls are returned together
/// with a final forward run. Hitting `max_iter` is not an error; check
/// `converged`.
pub fn forward_backward_sweep(
    params: &ModelParams,
    weights: &CostWeights,
    bounds: &ControlBounds,
    y0: &State8,
    t_final: f64,
    solver: &Solver,
    cfg: &SweepConfig,
) -> Result<SweepResult> {
    params.validate()?;
    weights.validate()?;
    bounds.validate()?;
    cfg.validate()?;
    y0.validate()?;
    let nodes = match solver {
        Solver::Abm { n_steps } => n_steps + 1,
        Solver::Rkf45(_) => cfg.nodes,
    };
    let init = bounds.clamp(ControlVector::baseline(params));
    let mut schedule = ControlSchedule::constant(t_final, nodes, init, *bounds)?;
    let u_max = bounds.to_array();

    let wrap = |iteration: usize| {
        move |e: Error| Error::Sweep {
            iteration,
            source: Box::new(e),
        }
    };

    let mut history = Vec::new();
    let mut converged = false;
    let mut adjoint = None;
    let mut fwd = forward(params, &schedule, y0, solver).map_err(wrap(1))?;
    for iter in 1..=cfg.max_iter {
        let j = objective(&fwd, &schedule, weights).map_err(wrap(iter))?;
        let adj = backward(params, weights, &schedule, &fwd, solver).map_err(wrap(iter))?;

        let mut projected = Vec::with_capacity(nodes);
        let mut delta = 0.0f64;
        for ((&t, lam), old) in schedule
            .times
            .iter()
            .zip(&adj.values)
            .zip(&schedule.controls)
        {
            let x = State8::from_array(fwd.interpolate(t));
            let new = project_controls(&x, lam, params, weights, bounds).map_err(wrap(iter))?;
            let (a, b) = (new.to_array(), old.to_array());
            for k in 0..4 {
                if u_max[k].is_finite() && u_max[k] > 0.0 {
                    delta = delta.max((a[k] - b[k]).abs() / u_max[k]);
                } else {
                    delta = delta.max((a[k] - b[k]).abs());
                }
            }
            projected.push(new);
        }
        history.push(IterationRecord {
            iter,
            j,
            delta_u: delta,
        });
        adjoint = Some(adj);

        if delta < cfg.tol {
            schedule.controls = projected;
            converged = true;
        } else {
            let rho = cfg.relaxation;
            for (u, new) in schedule.controls.iter_mut().zip(&projected) {
                let (a, b) = (u.to_array(), new.to_array());
                *u = bounds.clamp(ControlVector::from_array(std::array::from_fn(|k| {
                    (1.0 - rho) * a[k] + rho * b[k]
                })));
            }
        }
        fwd = forward(params, &schedule, y0, solver).map_err(wrap(iter + 1))?;
        if converged {
            break;
        }
    }
    schedule.validate()?;
    let iterations = history.len();
    let cost = objective(&fwd, &schedule, weights)?;
    let grid_states: Vec<[f64; DIM]> = fwd.resample(&schedule.times);
    let summary = summarize(
        &schedule.times,
        &grid_states,
        |t| schedule.at(t),
        params.mu_d,
        cost,
    );
    Ok(SweepResult {
        converged,
        iterations,
        history,
        trajectory: fwd,
        adjoint: adjoint.expect("at least one iteration"),
        schedule,
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::disease_free_equilibrium;
    use crate::integrators::IntegratorConfig;

    fn seeded_state(params: &ModelParams) -> State8 {
        let mut y = disease_free_equilibrium(params).state;
        y.e = 100.0;
        y.i_s = 50.0;
        y.i_a = 20.0;
        y
    }

    #[test]
    fn no_burden_means_no_control() {
        let p = ModelParams::default();
        let w = CostWeights {
            a: [0.0; 4],
            ..Default::default()
        };
        let cfg = SweepConfig {
            nodes: 201,
            ..Default::default()
        };
        let res = forward_backward_sweep(
            &p,
            &w,
            &ControlBounds::default(),
            &seeded_state(&p),
            20.0,
            &Solver::Rkf45(IntegratorConfig::default()),
            &cfg,
        )
        .unwrap();
        assert!(res.converged);
        assert!(res
            .schedule
            .controls
            .iter()
            .all(|u| *u == ControlVector::ZERO));
        assert!(res.adjoint.values.iter().all(|l| *l == [0.0; DIM]));
    }

    #[test]
    fn transversality_and_bounds() {
        let p = ModelParams::default();
        let cfg = SweepConfig {
            nodes: 101,
            max_iter: 30,
            ..Default::default()
        };
        let res = forward_backward_sweep(
            &p,
            &CostWeights::default(),
            &ControlBounds::default(),
            &seeded_state(&p),
            10.0,
            &Solver::Rkf45(IntegratorConfig::default()),
            &cfg,
        )
        .unwrap();
        assert_eq!(*res.adjoint.values.last().unwrap(), [0.0; DIM]);
        assert!(res.schedule.validate().is_ok());
        assert!(res.summary.cost <= res.history[0].j);
    }

    #[test]
    fn rejects_bad_relaxation() {
        let cfg = SweepConfig {
            relaxation: 0.0,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
    }
}
