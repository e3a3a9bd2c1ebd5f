use serde::Serialize;

use super::{objective, summarize, ControlSchedule, CostWeights, OutcomeSummary};
use crate::error::Result;
use crate::integrators::{Solver, Trajectory};
use crate::model::{ControlBounds, ControlVector, ControlledModel, ModelParams, State8, DIM};

/// Constant-control intervention: every active control sits at its upper
/// bound, every inactive one at its baseline value (`u1 = u4 = 0`,
/// `u2 = v`, `u3 = h_s`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Strategy {
    pub name: String,
    pub active: [bool; 4],
}

impl Strategy {
    pub fn new(active: [bool; 4]) -> Self {
        let name = if active.iter().any(|&a| a) {
            active
                .iter()
                .enumerate()
                .filter(|(_, &a)| a)
                .map(|(i, _)| format!("u{}", i + 1))
                .collect::<Vec<_>>()
                .join("+")
        } else {
            "baseline".to_string()
        };
        Self { name, active }
    }

    /// Baseline plus the single and combined interventions of the scenario
    /// study.
    pub fn standard() -> Vec<Strategy> {
        [
            [false, false, false, false],
            [false, false, true, false],
            [false, false, false, true],
            [false, true, true, false],
            [false, false, true, true],
            [true, true, true, false],
            [false, true, true, true],
            [true, true, true, true],
        ]
        .into_iter()
        .map(Strategy::new)
        .collect()
    }

    pub fn controls(&self, params: &ModelParams, bounds: &ControlBounds) -> ControlVector {
        let base = ControlVector::baseline(params).to_array();
        let max = bounds.to_array();
        bounds.clamp(ControlVector::from_array(std::array::from_fn(|k| {
            if self.active[k] {
                max[k]
            } else {
                base[k]
            }
        })))
    }
}

#[derive(Debug, Clone)]
pub struct StrategyOutcome {
    pub name: String,
    pub controls: ControlVector,
    pub trajectory: Trajectory<DIM>,
    pub summary: OutcomeSummary,
    /// `100·(deaths_baseline − deaths)/deaths_baseline`.
    pub mortality_reduction_pct: f64,
}

#[derive(Debug, Clone)]
pub struct StrategyComparison {
    pub baseline_deaths: f64,
    pub outcomes: Vec<StrategyOutcome>,
}

impl StrategyComparison {
    pub fn get(&self, name: &str) -> Option<&StrategyOutcome> {
        self.outcomes.iter().find(|o| o.name == name)
    }

    /// `strategy,u1,u2,u3,u4,peak_infected,peak_time,deaths,cost,mortality_reduction_pct`
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(
            w,
            "strategy,u1,u2,u3,u4,peak_infected,peak_time,deaths,cost,mortality_reduction_pct"
        )?;
        for o in &self.outcomes {
            let u = o.controls;
            let s = o.summary;
            writeln!(
                w,
                "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                o.name,
                u.u1,
                u.u2,
                u.u3,
                u.u4,
                s.peak_infected,
                s.peak_time,
                s.deaths,
                s.cost,
                o.mortality_reduction_pct
            )?;
        }
        Ok(())
    }
}

struct Run {
    trajectory: Trajectory<DIM>,
    summary: OutcomeSummary,
}

#[allow(clippy::too_many_arguments)]
fn simulate_fixed(
    params: &ModelParams,
    u: ControlVector,
    bounds: &ControlBounds,
    y0: &State8,
    t_final: f64,
    solver: &Solver,
    weights: &CostWeights,
    nodes: usize,
) -> Result<Run> {
    let schedule = ControlSchedule::constant(t_final, nodes, u, *bounds)?;
    let system = ControlledModel {
        params: *params,
        bounds: *bounds,
        control: move |_t: f64| u,
    };
    let trajectory = solver.solve(&system, y0.to_array(), 0.0, t_final, params.alpha)?;
    let cost = objective(&trajectory, &schedule, weights)?;
    let summary = summarize(
        &trajectory.times,
        &trajectory.states,
        |_| u,
        params.mu_d,
        cost,
    );
    Ok(Run {
        trajectory,
        summary,
    })
}

fn reduction(baseline: f64, deaths: f64) -> f64 {
    if baseline > 0.0 {
        100.0 * (baseline - deaths) / baseline
    } else {
        0.0
    }
}

const COST_NODES: usize = 1001;

/// Integrates the controlled system with constant controls `fixed_u` and
/// scores it against the baseline strategy.
pub fn run_strategy(
    params: &ModelParams,
    fixed_u: ControlVector,
    bounds: &ControlBounds,
    y0: &State8,
    t_final: f64,
    solver: &Solver,
    weights: &CostWeights,
) -> Result<StrategyOutcome> {
    params.validate()?;
    bounds.check(&fixed_u)?;
    let base = ControlVector::baseline(params);
    let baseline = simulate_fixed(
        params, base, bounds, y0, t_final, solver, weights, COST_NODES,
    )?;
    let run = if fixed_u == base {
        Run {
            trajectory: baseline.trajectory.clone(),
            summary: baseline.summary,
        }
    } else {
        simulate_fixed(
            params, fixed_u, bounds, y0, t_final, solver, weights, COST_NODES,
        )?
    };
    Ok(StrategyOutcome {
        name: "custom".into(),
        controls: fixed_u,
        mortality_reduction_pct: reduction(baseline.summary.deaths, run.summary.deaths),
        trajectory: run.trajectory,
        summary: run.summary,
    })
}

pub fn compare_strategies(
    params: &ModelParams,
    strategies: &[Strategy],
    bounds: &ControlBounds,
    y0: &State8,
    t_final: f64,
    solver: &Solver,
    weights: &CostWeights,
) -> Result<StrategyComparison> {
    params.validate()?;
    bounds.validate()?;
    let base = ControlVector::baseline(params);
    let baseline = simulate_fixed(
        params, base, bounds, y0, t_final, solver, weights, COST_NODES,
    )?;
    let baseline_deaths = baseline.summary.deaths;
    let outcomes = strategies
        .iter()
        .map(|s| {
            let u = s.controls(params, bounds);
            let run = if u == base {
                Run {
                    trajectory: baseline.trajectory.clone(),
                    summary: baseline.summary,
                }
            } else {
                simulate_fixed(params, u, bounds, y0, t_final, solver, weights, COST_NODES)?
            };
            Ok(StrategyOutcome {
                name: s.name.clone(),
                controls: u,
                mortality_reduction_pct: reduction(baseline_deaths, run.summary.deaths),
                trajectory: run.trajectory,
                summary: run.summary,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StrategyComparison {
        baseline_deaths,
        outcomes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names() {
        let names: Vec<String> = Strategy::standard().into_iter().map(|s| s.name).collect();
        assert_eq!(names[0], "baseline");
        assert!(names.contains(&"u3+u4".to_string()));
        assert!(names.contains(&"u1+u2+u3+u4".to_string()));
    }

    #[test]
    fn controls_follow_activity() {
        let p = ModelParams::default();
        let b = ControlBounds::default();
        assert_eq!(
            Strategy::new([false; 4]).controls(&p, &b),
            ControlVector::baseline(&p)
        );
        let u = Strategy::new([false, false, true, true]).controls(&p, &b);
        assert_eq!(u.to_array(), [0.0, p.v, 0.8, 0.5]);
    }

    #[test]
    fn baseline_has_zero_reduction() {
        assert_eq!(reduction(10.0, 10.0), 0.0);
        assert_eq!(reduction(0.0, 0.0), 0.0);
        assert!((reduction(10.0, 4.0) - 60.0).abs() < 1e-12);
    }
}
