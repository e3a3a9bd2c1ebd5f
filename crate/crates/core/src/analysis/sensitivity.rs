use std::io::{self, Write};

use serde::Serialize;

use super::ngm::r0_closed_form;
use crate::error::{Error, Result};
use crate::model::{ModelParams, Param};

/// Indices below this magnitude are reported as having no effect.
pub const NO_EFFECT: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Positive,
    Negative,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Magnitude {
    NoEffect,
    VeryLow,
    Low,
    Medium,
    High,
}

impl Magnitude {
    pub fn classify(index: f64) -> Self {
        match index.abs() {
            x if x < NO_EFFECT => Magnitude::NoEffect,
            x if x < 0.08 => Magnitude::VeryLow,
            x if x < 0.2 => Magnitude::Low,
            x if x < 0.45 => Magnitude::Medium,
            _ => Magnitude::High,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SensitivityEntry {
    pub parameter: Param,
    pub key: &'static str,
    pub value: f64,
    pub index: f64,
    pub sign: Sign,
    pub magnitude: Magnitude,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SensitivityReport {
    pub r0: f64,
    pub entries: Vec<SensitivityEntry>,
}

impl SensitivityReport {
    pub fn get(&self, param: Param) -> Option<&SensitivityEntry> {
        self.entries.iter().find(|e| e.parameter == param)
    }

    /// `parameter,index`, largest magnitude first.
    pub fn write_tornado_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        let mut rows: Vec<&SensitivityEntry> = self.entries.iter().collect();
        rows.sort_by(|a, b| b.index.abs().total_cmp(&a.index.abs()));
        writeln!(w, "parameter,index")?;
        for e in rows {
            writeln!(w, "{},{:.16e}", e.key, e.index)?;
        }
        Ok(())
    }
}

/// Normalized index `(p/R0)·∂R0/∂p` by central difference of the closed form.
pub fn sensitivity_index(params: &ModelParams, param: Param) -> Result<f64> {
    let r0 = r0_closed_form(params);
    if !(r0 > 0.0 && r0.is_finite()) {
        return Err(Error::Domain(format!(
            "sensitivity indices need R0 > 0, got {r0}"
        )));
    }
    let x = param.get(params);
    let h = if x == 0.0 { 1e-9 } else { 1e-6 * x.abs() };
    let mut up = *params;
    let mut down = *params;
    param.set(&mut up, x + h);
    param.set(&mut down, x - h);
    let dr = (r0_closed_form(&up) - r0_closed_form(&down)) / ((x + h) - (x - h));
    Ok(x / r0 * dr)
}

pub fn sensitivity_indices(params: &ModelParams) -> Result<SensitivityReport> {
    params.validate()?;
    let r0 = r0_closed_form(params);
    let entries = Param::ALL
        .iter()
        .map(|&param| {
            let index = sensitivity_index(params, param)?;
            let magnitude = Magnitude::classify(index);
            let sign = match magnitude {
                Magnitude::NoEffect => Sign::None,
                _ if index > 0.0 => Sign::Positive,
                _ => Sign::Negative,
            };
            Ok(SensitivityEntry {
                parameter: param,
                key: param.key(),
                value: param.get(params),
                index,
                sign,
                magnitude,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SensitivityReport { r0, entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_cases() {
        let rep = sensitivity_indices(&ModelParams::default()).unwrap();
        assert!((rep.get(Param::Beta).unwrap().index - 1.0).abs() < 1e-8);
        let lam = rep.get(Param::Lambda).unwrap();
        assert!(lam.index.abs() < 1e-8);
        assert_eq!(lam.sign, Sign::None);
        assert_eq!(rep.entries.len(), 16);
    }

    #[test]
    fn zero_parameter_uses_absolute_step() {
        let p = ModelParams {
            v: 0.0,
            ..Default::default()
        };
        assert_eq!(sensitivity_index(&p, Param::V).unwrap(), 0.0);
    }

    #[test]
    fn requires_positive_r0() {
        let p = ModelParams {
            beta: 0.0,
            ..Default::default()
        };
        assert!(matches!(sensitivity_indices(&p), Err(Error::Domain(_))));
    }

    #[test]
    fn magnitude_classes() {
        assert_eq!(Magnitude::classify(-1.0), Magnitude::High);
        assert_eq!(Magnitude::classify(0.3), Magnitude::Medium);
        assert_eq!(Magnitude::classify(-0.1), Magnitude::Low);
        assert_eq!(Magnitude::classify(0.01), Magnitude::VeryLow);
        assert_eq!(Magnitude::classify(1e-12), Magnitude::NoEffect);
    }

    #[test]
    fn tornado_sorted_by_magnitude() {
        let rep = sensitivity_indices(&ModelParams::default()).unwrap();
        let mut buf = Vec::new();
        rep.write_tornado_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("parameter,index"));
        let mags: Vec<f64> = lines
            .map(|l| l.split(',').nth(1).unwrap().parse::<f64>().unwrap().abs())
            .collect();
        assert_eq!(mags.len(), 16);
        assert!(mags.windows(2).all(|w| w[0] >= w[1]));
    }
}
