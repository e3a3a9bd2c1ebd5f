//! Compartment state, parameters and right-hand sides of the eight-compartment
//! fractional Ebola model, with and without the four time-dependent controls.
//!
//! The contact factor multiplying `beta` is fixed to one, so `beta` is the
//! effective transmission rate. The normalising population in the force of
//! infection is the living population `N_L = S+V+E+Is+Ia+H+R`; deceased
//! individuals transmit through `eta_d * D` but are not counted in `N_L`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrators::OdeSystem;

/// Number of compartments.
pub const DIM: usize = 8;

/// CSV/JSON names of the compartments, in state-vector order.
pub const COMPARTMENTS: [&str; DIM] = ["S", "V", "E", "Is", "Ia", "H", "D", "R"];

/// Indices into the state vector.
pub mod idx {
    pub const S: usize = 0;
    pub const V: usize = 1;
    pub const E: usize = 2;
    pub const IS: usize = 3;
    pub const IA: usize = 4;
    pub const H: usize = 5;
    pub const D: usize = 6;
    pub const R: usize = 7;
}

/// Negative values of smaller magnitude than this are integrator round-off
/// and are clipped to zero.
pub const CLIP_TOLERANCE: f64 = 1e-9;

/// Epidemiological rates and fractions plus the fractional order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelParams {
    pub beta: f64,
    pub eta_a: f64,
    pub eta_d: f64,
    pub sigma: f64,
    pub p: f64,
    pub gamma_s: f64,
    pub gamma_a: f64,
    pub gamma_h: f64,
    pub delta_s: f64,
    pub delta_h: f64,
    pub h_s: f64,
    /// Recruitment into `S` (individuals per day).
    #[serde(rename = "Lambda")]
    pub recruitment: f64,
    pub mu: f64,
    pub mu_d: f64,
    pub v: f64,
    pub epsilon: f64,
    pub omega: f64,
    pub alpha: f64,
}

impl Default for ModelParams {
    /// Nominal values. `v`, `epsilon` and `omega` are the midpoints of their
    /// admissible ranges; `gamma_h` and `mu_d` have no published value and
    /// are set to a 10-day hospital recovery and a 20-day time to burial.
    fn default() -> Self {
        Self {
            beta: 0.287,
            eta_a: 0.523,
            eta_d: 0.734,
            sigma: 0.094,
            p: 0.712,
            gamma_s: 0.068,
            gamma_a: 0.089,
            gamma_h: 0.1,
            delta_s: 0.103,
            delta_h: 0.067,
            h_s: 0.312,
            recruitment: 100.0,
            mu: 3.5e-5,
            mu_d: 0.05,
            v: 0.04,
            epsilon: 0.90,
            omega: 0.003,
            alpha: 0.85,
        }
    }
}

/// Aggregated loss rates `q0..q6`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompositeRates {
    pub q0: f64,
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
    pub q4: f64,
    pub q5: f64,
    pub q6: f64,
}

impl ModelParams {
    pub fn rates(&self) -> CompositeRates {
        CompositeRates {
            q0: self.v + self.mu,
            q1: self.mu + self.omega,
            q2: self.mu + self.sigma,
            q3: self.gamma_s + self.delta_s + self.h_s + self.mu,
            q4: self.gamma_a + self.mu,
            q5: self.gamma_h + self.delta_h + self.mu,
            q6: self.mu_d,
        }
    }

    /// Carrying capacity `Λ/μ` of the disease-free living population.
    pub fn carrying_capacity(&self) -> f64 {
        self.recruitment / self.mu
    }

    pub fn validate(&self) -> Result<()> {
        for param in Param::ALL
            .iter()
            .copied()
            .chain([Param::GammaH, Param::Alpha])
        {
            let x = param.get(self);
            if !x.is_finite() {
                return Err(Error::param(param.key(), format!("{x} is not finite")));
            }
            if x < 0.0 {
                return Err(Error::param(param.key(), format!("{x} is negative")));
            }
        }
        if self.p > 1.0 {
            return Err(Error::param("p", "must lie in [0, 1]"));
        }
        if self.epsilon > 1.0 {
            return Err(Error::param("epsilon", "must lie in [0, 1]"));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::param("alpha", "must lie in (0, 1]"));
        }
        if self.mu <= 0.0 {
            return Err(Error::param("mu", "must be positive"));
        }
        if self.mu_d <= 0.0 {
            return Err(Error::param("mu_d", "must be positive"));
        }
        Ok(())
    }
}

/// Named handle on a scalar parameter. `ALL` lists the sixteen parameters
/// that enter the reproduction number, in reporting order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Param {
    Beta,
    Sigma,
    EtaD,
    EtaA,
    GammaS,
    DeltaS,
    Omega,
    DeltaH,
    Epsilon,
    P,
    V,
    HS,
    GammaA,
    Mu,
    MuD,
    Lambda,
    GammaH,
    Alpha,
}

impl Param {
    pub const ALL: [Param; 16] = [
        Param::Beta,
        Param::Sigma,
        Param::EtaD,
        Param::EtaA,
        Param::GammaS,
        Param::DeltaS,
        Param::Omega,
        Param::DeltaH,
        Param::Epsilon,
        Param::P,
        Param::V,
        Param::HS,
        Param::GammaA,
        Param::Mu,
        Param::MuD,
        Param::Lambda,
    ];

    /// JSON key of the parameter.
    pub fn key(self) -> &'static str {
        match self {
            Param::Beta => "beta",
            Param::Sigma => "sigma",
            Param::EtaD => "eta_d",
            Param::EtaA => "eta_a",
            Param::GammaS => "gamma_s",
            Param::DeltaS => "delta_s",
            Param::Omega => "omega",
            Param::DeltaH => "delta_h",
            Param::Epsilon => "epsilon",
            Param::P => "p",
            Param::V => "v",
            Param::HS => "h_s",
            Param::GammaA => "gamma_a",
            Param::Mu => "mu",
            Param::MuD => "mu_d",
            Param::Lambda => "Lambda",
            Param::GammaH => "gamma_h",
            Param::Alpha => "alpha",
        }
    }

    pub fn get(self, p: &ModelParams) -> f64 {
        match self {
            Param::Beta => p.beta,
            Param::Sigma => p.sigma,
            Param::EtaD => p.eta_d,
            Param::EtaA => p.eta_a,
            Param::GammaS => p.gamma_s,
            Param::DeltaS => p.delta_s,
            Param::Omega => p.omega,
            Param::DeltaH => p.delta_h,
            Param::Epsilon => p.epsilon,
            Param::P => p.p,
            Param::V => p.v,
            Param::HS => p.h_s,
            Param::GammaA => p.gamma_a,
            Param::Mu => p.mu,
            Param::MuD => p.mu_d,
            Param::Lambda => p.recruitment,
            Param::GammaH => p.gamma_h,
            Param::Alpha => p.alpha,
        }
    }

    pub fn set(self, p: &mut ModelParams, value: f64) {
        let slot = match self {
            Param::Beta => &mut p.beta,
            Param::Sigma => &mut p.sigma,
            Param::EtaD => &mut p.eta_d,
            Param::EtaA => &mut p.eta_a,
            Param::GammaS => &mut p.gamma_s,
            Param::DeltaS => &mut p.delta_s,
            Param::Omega => &mut p.omega,
            Param::DeltaH => &mut p.delta_h,
            Param::Epsilon => &mut p.epsilon,
            Param::P => &mut p.p,
            Param::V => &mut p.v,
            Param::HS => &mut p.h_s,
            Param::GammaA => &mut p.gamma_a,
            Param::Mu => &mut p.mu,
            Param::MuD => &mut p.mu_d,
            Param::Lambda => &mut p.recruitment,
            Param::GammaH => &mut p.gamma_h,
            Param::Alpha => &mut p.alpha,
        };
        *slot = value;
    }
}

/// One point of the compartment state (individuals).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct State8 {
    #[serde(rename = "S")]
    pub s: f64,
    #[serde(rename = "V")]
    pub v: f64,
    #[serde(rename = "E")]
    pub e: f64,
    #[serde(rename = "Is")]
    pub i_s: f64,
    #[serde(rename = "Ia")]
    pub i_a: f64,
    #[serde(rename = "H")]
    pub h: f64,
    #[serde(rename = "D")]
    pub d: f64,
    #[serde(rename = "R")]
    pub r: f64,
}

impl State8 {
    pub fn from_array(y: [f64; DIM]) -> Self {
        let [s, v, e, i_s, i_a, h, d, r] = y;
        Self {
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

    pub fn to_array(&self) -> [f64; DIM] {
        [
            self.s, self.v, self.e, self.i_s, self.i_a, self.h, self.d, self.r,
        ]
    }

    /// `N_L`, everyone except the deceased.
    pub fn living(&self) -> f64 {
        self.s + self.v + self.e + self.i_s + self.i_a + self.h + self.r
    }

    /// Weighted infectious mass `Is + eta_a Ia + eta_d D`.
    pub fn infectious_mass(&self, params: &ModelParams) -> f64 {
        self.i_s + params.eta_a * self.i_a + params.eta_d * self.d
    }

    /// Living infected individuals `E + Is + Ia + H`.
    pub fn infected(&self) -> f64 {
        self.e + self.i_s + self.i_a + self.h
    }

    pub fn validate(&self) -> Result<()> {
        for (name, x) in COMPARTMENTS.iter().zip(self.to_array()) {
            if !x.is_finite() || x < 0.0 {
                return Err(Error::Domain(format!(
                    "compartment {name} must be finite and non-negative, got {x}"
                )));
            }
        }
        Ok(())
    }
}

/// Control intensities `(u1, u2, u3, u4)`: personal protection, vaccination,
/// treatment (hospitalisation) and safe burial.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControlVector {
    pub u1: f64,
    pub u2: f64,
    pub u3: f64,
    pub u4: f64,
}

impl ControlVector {
    pub const ZERO: ControlVector = ControlVector {
        u1: 0.0,
        u2: 0.0,
        u3: 0.0,
        u4: 0.0,
    };

    pub fn from_array(u: [f64; 4]) -> Self {
        Self {
            u1: u[0],
            u2: u[1],
            u3: u[2],
            u4: u[3],
        }
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.u1, self.u2, self.u3, self.u4]
    }

    /// Controls that reproduce the uncontrolled model: no protection, the
    /// baseline vaccination and hospitalisation rates, no extra burial.
    pub fn baseline(params: &ModelParams) -> Self {
        Self {
            u1: 0.0,
            u2: params.v,
            u3: params.h_s,
            u4: 0.0,
        }
    }
}

/// Upper bounds of the admissible control set; lower bounds are zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ControlBounds {
    pub u1_max: f64,
    pub u2_max: f64,
    pub u3_max: f64,
    pub u4_max: f64,
}

impl Default for ControlBounds {
    fn default() -> Self {
        Self {
            u1_max: 0.8,
            u2_max: 0.15,
            u3_max: 0.8,
            u4_max: 0.5,
        }
    }
}

impl ControlBounds {
    /// Bounds that admit any non-negative control (and `u1` up to 1).
    pub fn relaxed() -> Self {
        Self {
            u1_max: 1.0,
            u2_max: f64::INFINITY,
            u3_max: f64::INFINITY,
            u4_max: f64::INFINITY,
        }
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.u1_max, self.u2_max, self.u3_max, self.u4_max]
    }

    pub fn validate(&self) -> Result<()> {
        for (name, m) in ["u1_max", "u2_max", "u3_max", "u4_max"]
            .iter()
            .zip(self.to_array())
        {
            if m.is_nan() || m < 0.0 {
                return Err(Error::ControlBounds(format!("{name} = {m} is invalid")));
            }
        }
        if self.u1_max > 1.0 {
            return Err(Error::ControlBounds("u1_max must not exceed 1".into()));
        }
        Ok(())
    }

    pub fn check(&self, u: &ControlVector) -> Result<()> {
        for (j, (x, m)) in u.to_array().iter().zip(self.to_array()).enumerate() {
            if !(x.is_finite() && *x >= 0.0 && *x <= m) {
                return Err(Error::ControlBounds(format!(
                    "u{} = {x} outside [0, {m}]",
                    j + 1
                )));
            }
        }
        Ok(())
    }

    pub fn clamp(&self, u: ControlVector) -> ControlVector {
        let m = self.to_array();
        let mut a = u.to_array();
        for (x, hi) in a.iter_mut().zip(m) {
            *x = x.clamp(0.0, hi);
        }
        ControlVector::from_array(a)
    }
}

/// Force of infection `beta (Is + eta_a Ia + eta_d D) / N_L`.
pub fn force_of_infection(state: &State8, params: &ModelParams) -> Result<f64> {
    let n = state.living();
    if !(n > 0.0) {
        return Err(Error::Domain(format!(
            "living population must be positive to evaluate the force of infection, got {n}"
        )));
    }
    Ok(params.beta * state.infectious_mass(params) / n)
}

pub fn rhs_uncontrolled(_t: f64, state: &State8, params: &ModelParams) -> Result<[f64; DIM]> {
    let lambda = force_of_infection(state, params)?;
    let q = params.rates();
    let State8 {
        s,
        v,
        e,
        i_s,
        i_a,
        h,
        d,
        r,
    } = *state;
    let eps = params.epsilon;
    Ok([
        params.recruitment - lambda * s + params.omega * v - q.q0 * s,
        params.v * s - (1.0 - eps) * lambda * v - q.q1 * v,
        lambda * (s + (1.0 - eps) * v) - q.q2 * e,
        params.p * params.sigma * e - q.q3 * i_s,
        (1.0 - params.p) * params.sigma * e - q.q4 * i_a,
        params.h_s * i_s - q.q5 * h,
        params.delta_s * i_s + params.delta_h * h - q.q6 * d,
        params.gamma_s * i_s + params.gamma_a * i_a + params.gamma_h * h - params.mu * r,
    ])
}

/// Controlled right-hand side; `u` is checked against `bounds` first.
pub fn rhs_controlled(
    t: f64,
    state: &State8,
    params: &ModelParams,
    u: &ControlVector,
    bounds: &ControlBounds,
) -> Result<[f64; DIM]> {
    bounds.check(u)?;
    controlled_unchecked(t, state, params, u)
}

pub(crate) fn controlled_unchecked(
    _t: f64,
    state: &State8,
    params: &ModelParams,
    u: &ControlVector,
) -> Result<[f64; DIM]> {
    let lambda = (1.0 - u.u1) * force_of_infection(state, params)?;
    let State8 {
        s,
        v,
        e,
        i_s,
        i_a,
        h,
        d,
        r,
    } = *state;
    let mu = params.mu;
    let eps = params.epsilon;
    Ok([
        params.recruitment - lambda * s + params.omega * v - (mu + u.u2) * s,
        u.u2 * s - (1.0 - eps) * lambda * v - (mu + params.omega) * v,
        lambda * (s + (1.0 - eps) * v) - (mu + params.sigma) * e,
        params.p * params.sigma * e - (params.gamma_s + params.delta_s + u.u3 + mu) * i_s,
        (1.0 - params.p) * params.sigma * e - (params.gamma_a + mu) * i_a,
        u.u3 * i_s - (params.gamma_h + params.delta_h + mu) * h,
        params.delta_s * i_s + params.delta_h * h - (u.u4 + params.mu_d) * d,
        params.gamma_s * i_s + params.gamma_a * i_a + params.gamma_h * h - mu * r,
    ])
}

/// Clip round-off negatives, reject anything more negative than
/// [`CLIP_TOLERANCE`].
pub(crate) fn admit_nonnegative(y: &mut [f64; DIM]) -> std::result::Result<(), (usize, f64)> {
    for (i, x) in y.iter_mut().enumerate() {
        if *x < 0.0 {
            if *x >= -CLIP_TOLERANCE {
                *x = 0.0;
            } else {
                return Err((i, *x));
            }
        }
    }
    Ok(())
}

/// The uncontrolled model as an integrable system.
#[derive(Debug, Clone, Copy)]
pub struct EbolaModel {
    pub params: ModelParams,
}

impl OdeSystem<DIM> for EbolaModel {
    fn rhs(&self, t: f64, y: &[f64; DIM]) -> Result<[f64; DIM]> {
        rhs_uncontrolled(t, &State8::from_array(*y), &self.params)
    }

    fn admit(&self, y: &mut [f64; DIM]) -> std::result::Result<(), (usize, f64)> {
        admit_nonnegative(y)
    }
}

/// The controlled model driven by a control law `u(t)`.
pub struct ControlledModel<F> {
    pub params: ModelParams,
    pub bounds: ControlBounds,
    pub control: F,
}

impl<F: Fn(f64) -> ControlVector> OdeSystem<DIM> for ControlledModel<F> {
    fn rhs(&self, t: f64, y: &[f64; DIM]) -> Result<[f64; DIM]> {
        let u = (self.control)(t);
        rhs_controlled(t, &State8::from_array(*y), &self.params, &u, &self.bounds)
    }

    fn admit(&self, y: &mut [f64; DIM]) -> std::result::Result<(), (usize, f64)> {
        admit_nonnegative(y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[allow(clippy::too_many_arguments)]
    fn state(s: f64, v: f64, e: f64, i_s: f64, i_a: f64, h: f64, d: f64, r: f64) -> State8 {
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

    #[test]
    fn no_infectious_mass_means_no_force() {
        let p = ModelParams::default();
        let y = state(500.0, 200.0, 30.0, 0.0, 0.0, 4.0, 0.0, 10.0);
        assert_eq!(force_of_infection(&y, &p).unwrap(), 0.0);
    }

    #[test]
    fn zero_beta_means_no_force() {
        let p = ModelParams {
            beta: 0.0,
            ..Default::default()
        };
        let y = state(500.0, 200.0, 30.0, 10.0, 5.0, 4.0, 3.0, 10.0);
        assert_eq!(force_of_infection(&y, &p).unwrap(), 0.0);
    }

    #[test]
    fn force_of_infection_hand_value() {
        let p = ModelParams::default();
        let y = state(1000.0, 0.0, 0.0, 10.0, 0.0, 0.0, 0.0, 0.0);
        let lam = force_of_infection(&y, &p).unwrap();
        assert!((lam - 0.287 * 10.0 / 1010.0).abs() < 1e-15);
        assert!((lam - 2.8416e-3).abs() < 1e-7);
    }

    #[test]
    fn force_of_infection_needs_living_population() {
        let p = ModelParams::default();
        let y = state(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 5.0, 0.0);
        assert!(matches!(force_of_infection(&y, &p), Err(Error::Domain(_))));
        assert!(rhs_uncontrolled(0.0, &y, &p).is_err());
    }

    #[test]
    fn empty_population_with_only_recruitment() {
        // N_L = 0 would be a domain error, so use a vanishing susceptible
        // pool with Λ dominating everything else.
        let p = ModelParams::default();
        let y = state(1e-300, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        let f = rhs_uncontrolled(0.0, &y, &p).unwrap();
        assert_eq!(f[0], 100.0);
        assert!(f[1..].iter().all(|x| x.abs() < 1e-290));
    }

    #[test]
    fn d_loss_term_with_burial_control() {
        let p = ModelParams::default();
        let y = state(1000.0, 0.0, 0.0, 0.0, 0.0, 0.0, 10.0, 0.0);
        let u = ControlVector {
            u4: 0.5,
            ..ControlVector::baseline(&p)
        };
        let f = rhs_controlled(0.0, &y, &p, &u, &ControlBounds::default()).unwrap();
        assert!((f[idx::D] + (0.5 + p.mu_d) * 10.0).abs() < 1e-14);
    }

    #[test]
    fn full_protection_removes_exposure_inflow() {
        let p = ModelParams::default();
        let y = state(1000.0, 300.0, 0.0, 10.0, 5.0, 2.0, 3.0, 1.0);
        let u = ControlVector {
            u1: 1.0,
            ..ControlVector::baseline(&p)
        };
        assert!(rhs_controlled(0.0, &y, &p, &u, &ControlBounds::default()).is_err());
        let f = rhs_controlled(0.0, &y, &p, &u, &ControlBounds::relaxed()).unwrap();
        assert_eq!(f[idx::E], 0.0);
    }

    #[test]
    fn out_of_bounds_control_is_rejected() {
        let p = ModelParams::default();
        let y = state(1000.0, 0.0, 0.0, 10.0, 0.0, 0.0, 0.0, 0.0);
        for u in [
            ControlVector {
                u1: -0.1,
                ..ControlVector::ZERO
            },
            ControlVector {
                u2: 0.2,
                ..ControlVector::ZERO
            },
            ControlVector {
                u4: f64::NAN,
                ..ControlVector::ZERO
            },
        ] {
            let err = rhs_controlled(0.0, &y, &p, &u, &ControlBounds::default()).unwrap_err();
            assert!(matches!(err, Error::ControlBounds(_)));
        }
    }

    #[test]
    fn params_json_keys_round_trip() {
        let p = ModelParams::default();
        let json = serde_json::to_value(p).unwrap();
        let keys: Vec<_> = json.as_object().unwrap().keys().cloned().collect();
        for k in [
            "beta", "eta_a", "eta_d", "sigma", "p", "gamma_s", "gamma_a", "gamma_h", "delta_s",
            "delta_h", "h_s", "Lambda", "mu", "mu_d", "v", "epsilon", "omega", "alpha",
        ] {
            assert!(keys.iter().any(|x| x == k), "missing key {k}");
        }
        assert_eq!(keys.len(), 18);
        let back: ModelParams = serde_json::from_value(json).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<ModelParams>(r#"{"c": 1.0}"#).is_err());
    }

    #[test]
    fn validation_catches_bad_values() {
        let ok = ModelParams::default();
        ok.validate().unwrap();
        for bad in [
            ModelParams { p: 1.5, ..ok },
            ModelParams {
                epsilon: -0.1,
                ..ok
            },
            ModelParams { alpha: 0.0, ..ok },
            ModelParams { alpha: 1.2, ..ok },
            ModelParams { mu: 0.0, ..ok },
            ModelParams { mu_d: 0.0, ..ok },
            ModelParams {
                sigma: f64::NAN,
                ..ok
            },
            ModelParams {
                gamma_h: -1.0,
                ..ok
            },
        ] {
            assert!(bad.validate().is_err(), "{bad:?}");
        }
    }

    #[test]
    fn clipping_policy() {
        let mut y = [1.0, -5e-10, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0];
        admit_nonnegative(&mut y).unwrap();
        assert_eq!(y[1], 0.0);
        let mut y = [1.0, -2e-9, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0];
        assert_eq!(admit_nonnegative(&mut y), Err((1, -2e-9)));
    }

    fn arb_params() -> impl Strategy<Value = ModelParams> {
        (
            (
                0.2..0.4f64,
                0.3..0.7f64,
                0.5..0.9f64,
                0.05..0.15f64,
                0.5..0.8f64,
            ),
            (
                0.05..0.1f64,
                0.07..0.12f64,
                0.05..0.2f64,
                0.05..0.15f64,
                0.03..0.09f64,
            ),
            (0.2..0.4f64, 100.0..1000.0f64, 0.03..0.5f64, 0.005..0.08f64),
            (0.85..0.95f64, 0.0027..0.0037f64),
        )
            .prop_map(|(a, b, c, d)| ModelParams {
                beta: a.0,
                eta_a: a.1,
                eta_d: a.2,
                sigma: a.3,
                p: a.4,
                gamma_s: b.0,
                gamma_a: b.1,
                gamma_h: b.2,
                delta_s: b.3,
                delta_h: b.4,
                h_s: c.0,
                recruitment: c.1,
                mu: 3.5e-5,
                mu_d: c.2,
                v: c.3,
                epsilon: d.0,
                omega: d.1,
                alpha: 0.85,
            })
    }

    fn arb_state() -> impl Strategy<Value = [f64; DIM]> {
        prop::array::uniform8(0.0..1e5f64).prop_map(|mut y| {
            y[0] += 1.0;
            y
        })
    }

    proptest! {
        #[test]
        fn living_mass_identity(p in arb_params(), y in arb_state()) {
            let st = State8::from_array(y);
            let f = rhs_uncontrolled(0.0, &st, &p).unwrap();
            let living: f64 = f.iter().enumerate().filter(|(i, _)| *i != idx::D).map(|(_, x)| x).sum();
            let expected = p.recruitment - p.mu * st.living() - p.delta_s * st.i_s - p.delta_h * st.h;
            let scale = 1.0 + p.recruitment + st.living();
            prop_assert!((living - expected).abs() <= 1e-12 * scale);
        }

        #[test]
        fn boundary_fluxes_are_nonnegative(p in arb_params(), y in arb_state(), k in 0usize..DIM) {
            let mut y = y;
            y[k] = 0.0;
            if y.iter().enumerate().filter(|(i, _)| *i != idx::D).map(|(_, x)| x).sum::<f64>() > 0.0 {
                let f = rhs_uncontrolled(0.0, &State8::from_array(y), &p).unwrap();
                prop_assert!(f[k] >= 0.0, "component {} flux {}", k, f[k]);
            }
        }

        #[test]
        fn baseline_controls_reproduce_uncontrolled(p in arb_params(), y in arb_state()) {
            let st = State8::from_array(y);
            let a = rhs_uncontrolled(0.0, &st, &p).unwrap();
            let u = ControlVector::baseline(&p);
            let b = rhs_controlled(0.0, &st, &p, &u, &ControlBounds::default()).unwrap();
            for i in 0..DIM {
                prop_assert!((a[i] - b[i]).abs() <= 1e-14 * (1.0 + a[i].abs()));
            }
        }
    }
}
