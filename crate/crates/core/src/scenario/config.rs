use serde::{Deserialize, Serialize};

use super::ScenarioError;
use crate::analysis::disease_free_equilibrium;
use crate::control::{CostWeights, SweepConfig};
use crate::integrators::{IntegratorConfig, IntegratorKind, Solver};
use crate::model::{ControlBounds, ControlVector, ModelParams, State8};

/// What drives the control inputs of a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum StrategyChoice {
    /// The uncontrolled model.
    #[default]
    None,
    /// Constant controls.
    Fixed { controls: ControlVector },
    /// Controls from the forward–backward sweep.
    Optimal,
}

/// Synthetic training-set settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExportConfig {
    pub n_points: usize,
    pub noise_level: f64,
}

impl Default for ExportConfig {
    fn default() -> Self {
        Self {
            n_points: 200,
            noise_level: 0.0,
        }
    }
}

/// One scenario, read from a single strict JSON document. Every field is
/// optional and defaults to the nominal value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub params: ModelParams,
    /// Defaults to the disease-free equilibrium seeded with `E = 100`,
    /// `Is = 50`, `Ia = 20`.
    pub initial_state: Option<State8>,
    #[serde(rename = "T")]
    pub horizon: f64,
    pub integrator: IntegratorKind,
    pub rkf45: IntegratorConfig,
    pub abm_steps: usize,
    pub strategy: StrategyChoice,
    pub bounds: ControlBounds,
    pub weights: CostWeights,
    pub sweep: SweepConfig,
    pub export: ExportConfig,
    pub output_dir: Option<String>,
    pub seed: u64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            params: ModelParams::default(),
            initial_state: None,
            horizon: 100.0,
            integrator: IntegratorKind::Rkf45,
            rkf45: IntegratorConfig::default(),
            abm_steps: 1000,
            strategy: StrategyChoice::None,
            bounds: ControlBounds::default(),
            weights: CostWeights::default(),
            sweep: SweepConfig::default(),
            export: ExportConfig::default(),
            output_dir: None,
            seed: 0,
        }
    }
}

pub fn default_initial_state(params: &ModelParams) -> State8 {
    let mut y = disease_free_equilibrium(params).state;
    y.e = 100.0;
    y.i_s = 50.0;
    y.i_a = 20.0;
    y
}

impl ScenarioConfig {
    /// Parses and validates. Parse errors carry the line and column.
    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        let cfg: ScenarioConfig =
            serde_json::from_str(text).map_err(|e| ScenarioError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let cfg_err = |e: crate::Error| ScenarioError::Config(e.to_string());
        self.params.validate().map_err(cfg_err)?;
        self.initial_state().validate().map_err(cfg_err)?;
        if self.initial_state().living() <= 0.0 {
            return Err(ScenarioError::Config(
                "initial living population must be positive".into(),
            ));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(ScenarioError::Config(format!(
                "T must be positive and finite, got {}",
                self.horizon
            )));
        }
        self.rkf45.validate().map_err(cfg_err)?;
        if self.abm_steps < 2 {
            return Err(ScenarioError::Config("abm_steps must be at least 2".into()));
        }
        self.bounds.validate().map_err(cfg_err)?;
        if let StrategyChoice::Fixed { controls } = &self.strategy {
            self.bounds.check(controls).map_err(cfg_err)?;
        }
        self.weights.validate().map_err(cfg_err)?;
        self.sweep.validate().map_err(cfg_err)?;
        if self.export.n_points < 10 {
            return Err(ScenarioError::Config(
                "export.n_points must be at least 10".into(),
            ));
        }
        if !(self.export.noise_level >= 0.0 && self.export.noise_level.is_finite()) {
            return Err(ScenarioError::Config(format!(
                "export.noise_level must be finite and non-negative, got {}",
                self.export.noise_level
            )));
        }
        Ok(())
    }

    pub fn initial_state(&self) -> State8 {
        self.initial_state
            .unwrap_or_else(|| default_initial_state(&self.params))
    }

    pub fn solver(&self) -> Solver {
        match self.integrator {
            IntegratorKind::Rkf45 => Solver::Rkf45(self.rkf45),
            IntegratorKind::Abm => Solver::Abm {
                n_steps: self.abm_steps,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_gives_defaults() {
        let cfg = ScenarioConfig::from_json("{}").unwrap();
        assert_eq!(cfg, ScenarioConfig::default());
        assert_eq!(cfg.params, ModelParams::default());
    }

    #[test]
    fn unknown_keys_rejected() {
        for doc in [
            r#"{"bogus": 1}"#,
            r#"{"params": {"betta": 0.3}}"#,
            r#"{"strategy": {"kind": "fixed", "controls": {"u1": 0, "u2": 0, "u3": 0, "u4": 0}, "x": 1}}"#,
        ] {
            assert!(
                matches!(
                    ScenarioConfig::from_json(doc),
                    Err(ScenarioError::Config(_))
                ),
                "{doc}"
            );
        }
    }

    #[test]
    fn parse_errors_name_the_line() {
        let err = ScenarioConfig::from_json("{\n  \"T\": 10,\n  \"params\": {\"beta\": }\n}")
            .unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
    }

    #[test]
    fn invalid_values_are_config_errors() {
        for doc in [
            r#"{"T": -1}"#,
            r#"{"params": {"p": 1.5}}"#,
            r#"{"export": {"noise_level": -0.1}}"#,
            r#"{"export": {"n_points": 3}}"#,
            r#"{"strategy": {"kind": "fixed", "controls": {"u1": 0.9, "u2": 0, "u3": 0, "u4": 0}}}"#,
        ] {
            assert!(
                matches!(
                    ScenarioConfig::from_json(doc),
                    Err(ScenarioError::Config(_))
                ),
                "{doc}"
            );
        }
    }

    #[test]
    fn strategy_forms() {
        let cfg =
            ScenarioConfig::from_json(r#"{"strategy": {"kind": "optimal"}, "integrator": "abm"}"#)
                .unwrap();
        assert_eq!(cfg.strategy, StrategyChoice::Optimal);
        assert_eq!(cfg.solver(), Solver::Abm { n_steps: 1000 });
    }

    #[test]
    fn default_initial_state_is_seeded_dfe() {
        let cfg = ScenarioConfig::default();
        let y = cfg.initial_state();
        assert_eq!((y.e, y.i_s, y.i_a, y.h, y.d), (100.0, 50.0, 20.0, 0.0, 0.0));
        assert!(y.s > 0.0 && y.v > 0.0);
    }
}
