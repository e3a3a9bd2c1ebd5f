use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;
use serde_json::json;

use super::{Artifact, ScenarioConfig, ScenarioError, StrategyChoice};
use crate::analysis::{
    disease_free_equilibrium, endemic_equilibrium, r0_closed_form, r0_spectral,
    sensitivity_indices, stability_check, EquilibriumPoint, StabilityReport,
};
use crate::control::{
    compare_strategies, forward_backward_sweep, summarize, uniform_grid, Strategy, SweepResult,
    ADJOINT_HEADER,
};
use crate::integrators::{write_rows, Trajectory};
use crate::model::{ControlVector, ControlledModel, EbolaModel, ModelParams, COMPARTMENTS, DIM};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    /// The sweep stopped at `max_iter` without meeting its tolerance.
    NotConverged,
}

#[derive(Debug, Clone)]
pub struct CommandOutput {
    pub artifacts: Vec<Artifact>,
    pub status: Status,
}

impl CommandOutput {
    fn ok(artifacts: Vec<Artifact>) -> Self {
        Self {
            artifacts,
            status: Status::Success,
        }
    }

    pub fn get(&self, name: &str) -> Option<&Artifact> {
        self.artifacts.iter().find(|a| a.name == name)
    }
}

const STATE_HEADER: [&str; DIM + 1] = ["t", "S", "V", "E", "Is", "Ia", "H", "D", "R"];

fn trajectory_artifact(name: &str, times: &[f64], states: &[[f64; DIM]]) -> Artifact {
    let mut buf = Vec::new();
    write_rows(&mut buf, &COMPARTMENTS, times, states).expect("in-memory write");
    Artifact::csv(name, &STATE_HEADER, 0, buf)
}

fn run_sweep(cfg: &ScenarioConfig) -> Result<SweepResult, ScenarioError> {
    Ok(forward_backward_sweep(
        &cfg.params,
        &cfg.weights,
        &cfg.bounds,
        &cfg.initial_state(),
        cfg.horizon,
        &cfg.solver(),
        &cfg.sweep,
    )?)
}

/// Trajectory CSV plus a JSON run summary.
pub fn simulate(cfg: &ScenarioConfig) -> Result<CommandOutput, ScenarioError> {
    cfg.validate()?;
    let p = &cfg.params;
    let y0 = cfg.initial_state();
    let solver = cfg.solver();
    let (traj, strategy, summary): (Trajectory<DIM>, _, _) = match cfg.strategy {
        StrategyChoice::None => {
            let tr = solver.solve(
                &EbolaModel { params: *p },
                y0.to_array(),
                0.0,
                cfg.horizon,
                p.alpha,
            )?;
            let s = summarize(
                &tr.times,
                &tr.states,
                |_| ControlVector::ZERO,
                p.mu_d,
                f64::NAN,
            );
            (tr, "none".to_string(), s)
        }
        StrategyChoice::Fixed { controls } => {
            let system = ControlledModel {
                params: *p,
                bounds: cfg.bounds,
                control: move |_t: f64| controls,
            };
            let tr = solver.solve(&system, y0.to_array(), 0.0, cfg.horizon, p.alpha)?;
            let s = summarize(&tr.times, &tr.states, |_| controls, p.mu_d, f64::NAN);
            (tr, "fixed".to_string(), s)
        }
        StrategyChoice::Optimal => {
            let res = run_sweep(cfg)?;
            let sched = res.schedule.clone();
            let s = summarize(
                &res.trajectory.times,
                &res.trajectory.states,
                |t| sched.at(t),
                p.mu_d,
                f64::NAN,
            );
            (res.trajectory, "optimal".to_string(), s)
        }
    };
    let final_state = crate::model::State8::from_array(traj.final_state());
    let report = json!({
        "integrator": traj.integrator,
        "strategy": strategy,
        "rows": traj.len(),
        "accepted": traj.accepted,
        "rejected": traj.rejected,
        "t_end": traj.t_end(),
        "final_state": final_state,
        "min_component_pre_clip": traj.min_component,
        "peak_infected": summary.peak_infected,
        "peak_time": summary.peak_time,
        "deaths": summary.deaths,
        "r0": r0_closed_form(p),
    });
    Ok(CommandOutput::ok(vec![
        trajectory_artifact("trajectory.csv", &traj.times, &traj.states),
        Artifact::json(
            "summary.json",
            &["integrator", "rows", "accepted", "final_state", "r0"],
            &report,
        ),
    ]))
}

#[derive(Serialize)]
struct PointReport {
    point: EquilibriumPoint,
    stability: StabilityReport,
}

/// R0 (both ways), equilibria with stability verdicts, sensitivity table.
pub fn analyze(cfg: &ScenarioConfig) -> Result<CommandOutput, ScenarioError> {
    cfg.validate()?;
    let p = &cfg.params;
    let r0 = r0_closed_form(p);
    let dfe = disease_free_equilibrium(p);
    let dfe_stability = stability_check(&dfe, p)?;
    let endemic = match endemic_equilibrium(p)? {
        Some(point) => {
            let stability = stability_check(&point, p)?;
            Some(PointReport { point, stability })
        }
        None => None,
    };
    let sensitivity = if r0 > 0.0 {
        Some(sensitivity_indices(p)?)
    } else {
        None
    };
    let report = json!({
        "r0_closed_form": r0,
        "r0_spectral": r0_spectral(p)?,
        "disease_free": PointReport { point: dfe, stability: dfe_stability },
        "endemic": endemic,
        "sensitivity": sensitivity,
    });
    let mut artifacts = vec![Artifact::json(
        "analysis.json",
        &[
            "r0_closed_form",
            "r0_spectral",
            "disease_free",
            "endemic",
            "sensitivity",
        ],
        &report,
    )];
    if let Some(s) = &sensitivity {
        let mut buf = Vec::new();
        s.write_tornado_csv(&mut buf).expect("in-memory write");
        artifacts.push(Artifact::csv(
            "tornado.csv",
            &["parameter", "index"],
            1,
            buf,
        ));
    }
    Ok(CommandOutput::ok(artifacts))
}

/// Forward–backward sweep artifacts.
pub fn control(cfg: &ScenarioConfig) -> Result<CommandOutput, ScenarioError> {
    cfg.validate()?;
    let res = run_sweep(cfg)?;
    let mut controls = Vec::new();
    res.schedule
        .write_csv(&mut controls)
        .expect("in-memory write");
    let mut adjoints = Vec::new();
    res.adjoint
        .write_csv(&mut adjoints)
        .expect("in-memory write");
    let mut conv = Vec::new();
    res.write_convergence_csv(&mut conv)
        .expect("in-memory write");
    let mut adj_header = vec!["t"];
    adj_header.extend(ADJOINT_HEADER);
    let grid_states = res.trajectory.resample(&res.schedule.times);
    let report = json!({
        "converged": res.converged,
        "iterations": res.iterations,
        "J_first": res.history.first().map(|r| r.j),
        "J_final": res.summary.cost,
        "delta_u_final": res.history.last().map(|r| r.delta_u),
        "tol": cfg.sweep.tol,
        "relaxation": cfg.sweep.relaxation,
        "integrator": res.trajectory.integrator,
        "summary": res.summary,
    });
    Ok(CommandOutput {
        artifacts: vec![
            Artifact::csv("controls.csv", &["t", "u1", "u2", "u3", "u4"], 0, controls),
            Artifact::csv("adjoints.csv", &adj_header, 0, adjoints),
            Artifact::csv("convergence.csv", &["iter", "J", "delta_u"], 0, conv),
            trajectory_artifact("trajectory.csv", &res.schedule.times, &grid_states),
            Artifact::json(
                "control_summary.json",
                &["converged", "iterations", "J_first", "J_final", "summary"],
                &report,
            ),
        ],
        status: if res.converged {
            Status::Success
        } else {
            Status::NotConverged
        },
    })
}

/// Constant-control scenario comparison against the baseline.
pub fn strategies(cfg: &ScenarioConfig) -> Result<CommandOutput, ScenarioError> {
    cfg.validate()?;
    let cmp = compare_strategies(
        &cfg.params,
        &Strategy::standard(),
        &cfg.bounds,
        &cfg.initial_state(),
        cfg.horizon,
        &cfg.solver(),
        &cfg.weights,
    )?;
    let mut table = Vec::new();
    cmp.write_csv(&mut table).expect("in-memory write");
    let rows: Vec<_> = cmp
        .outcomes
        .iter()
        .map(|o| {
            json!({
                "name": o.name,
                "controls": o.controls,
                "summary": o.summary,
                "mortality_reduction_pct": o.mortality_reduction_pct,
            })
        })
        .collect();
    let report = json!({ "baseline_deaths": cmp.baseline_deaths, "strategies": rows });
    let mut artifacts = vec![
        Artifact::csv(
            "strategies.csv",
            &[
                "strategy",
                "u1",
                "u2",
                "u3",
                "u4",
                "peak_infected",
                "peak_time",
                "deaths",
                "cost",
                "mortality_reduction_pct",
            ],
            1,
            table,
        ),
        Artifact::json(
            "strategies.json",
            &["baseline_deaths", "strategies"],
            &report,
        ),
    ];
    for o in &cmp.outcomes {
        let name = format!("trajectory_{}.csv", o.name.replace('+', "_"));
        artifacts.push(trajectory_artifact(
            &name,
            &o.trajectory.times,
            &o.trajectory.states,
        ));
    }
    Ok(CommandOutput::ok(artifacts))
}

#[derive(Serialize)]
struct DinnTruth<'a> {
    params: &'a ModelParams,
    initial_state: crate::model::State8,
    #[serde(rename = "T")]
    horizon: f64,
    n_points: usize,
    noise_level: f64,
    seed: u64,
    integrator: crate::integrators::IntegratorKind,
    columns: [&'static str; DIM + 1],
}

/// Synthetic training set for parameter recovery: the uncontrolled
/// trajectory sampled at `n_points` uniform times with multiplicative
/// Gaussian noise `x·(1 + level·z)`, floored at zero, plus a sidecar of the
/// true inputs.
pub fn export_dinn(cfg: &ScenarioConfig) -> Result<CommandOutput, ScenarioError> {
    cfg.validate()?;
    let p = &cfg.params;
    let y0 = cfg.initial_state();
    let solver = cfg.solver();
    let tr = solver.solve(
        &EbolaModel { params: *p },
        y0.to_array(),
        0.0,
        cfg.horizon,
        p.alpha,
    )?;
    let grid = uniform_grid(cfg.horizon, cfg.export.n_points)?;
    let mut rows = tr.resample(&grid);
    let level = cfg.export.noise_level;
    if level > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        for row in rows.iter_mut() {
            for x in row.iter_mut() {
                let z: f64 = StandardNormal.sample(&mut rng);
                *x = (*x * (1.0 + level * z)).max(0.0);
            }
        }
    }
    let truth = DinnTruth {
        params: p,
        initial_state: y0,
        horizon: cfg.horizon,
        n_points: cfg.export.n_points,
        noise_level: level,
        seed: cfg.seed,
        integrator: tr.integrator,
        columns: STATE_HEADER,
    };
    Ok(CommandOutput::ok(vec![
        trajectory_artifact("dinn_data.csv", &grid, &rows),
        Artifact::json(
            "dinn_truth.json",
            &["params", "initial_state", "T", "noise_level", "seed"],
            &truth,
        ),
    ]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> ScenarioConfig {
        ScenarioConfig {
            horizon: 10.0,
            ..Default::default()
        }
    }

    #[test]
    fn simulate_rows_match_steps() {
        let out = simulate(&quick()).unwrap();
        let csv = &out.get("trajectory.csv").unwrap().contents;
        let summary: serde_json::Value =
            serde_json::from_str(&out.get("summary.json").unwrap().contents).unwrap();
        let rows = csv.lines().count() - 1;
        assert_eq!(rows as u64, summary["accepted"].as_u64().unwrap() + 1);
        assert!(csv.starts_with("t,S,V,E,Is,Ia,H,D,R\n"));
        out.artifacts.iter().try_for_each(|a| a.validate()).unwrap();
    }

    #[test]
    fn analyze_without_transmission() {
        let mut cfg = quick();
        cfg.params.beta = 0.0;
        let out = analyze(&cfg).unwrap();
        let v: serde_json::Value =
            serde_json::from_str(&out.get("analysis.json").unwrap().contents).unwrap();
        assert_eq!(v["r0_closed_form"].as_f64(), Some(0.0));
        assert!(v["endemic"].is_null());
        assert!(out.get("tornado.csv").is_none());
    }

    #[test]
    fn noise_free_export_sits_on_the_interpolant() {
        let cfg = ScenarioConfig {
            export: crate::scenario::ExportConfig {
                n_points: 11,
                noise_level: 0.0,
            },
            ..quick()
        };
        let out = export_dinn(&cfg).unwrap();
        let tr = cfg
            .solver()
            .solve(
                &EbolaModel { params: cfg.params },
                cfg.initial_state().to_array(),
                0.0,
                10.0,
                1.0,
            )
            .unwrap();
        let csv = &out.get("dinn_data.csv").unwrap().contents;
        for line in csv.lines().skip(1) {
            let vals: Vec<f64> = line.split(',').map(|f| f.parse().unwrap()).collect();
            let expect = tr.interpolate(vals[0]);
            assert_eq!(&vals[1..], &expect[..]);
        }
    }

    #[test]
    fn noisy_export_is_seeded() {
        let cfg = ScenarioConfig {
            export: crate::scenario::ExportConfig {
                n_points: 20,
                noise_level: 0.01,
            },
            seed: 7,
            ..quick()
        };
        let a = export_dinn(&cfg).unwrap();
        let b = export_dinn(&cfg).unwrap();
        assert_eq!(a.artifacts, b.artifacts);
        let c = export_dinn(&ScenarioConfig { seed: 8, ..cfg }).unwrap();
        assert_ne!(a.get("dinn_data.csv"), c.get("dinn_data.csv"));
    }
}
