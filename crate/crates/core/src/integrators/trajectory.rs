use std::io::{self, Write};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IntegratorKind {
    Rkf45,
    Abm,
}

/// Error estimate and tolerance of one accepted adaptive step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepCheck {
    pub error: f64,
    pub bound: f64,
}

/// Time-indexed states produced by one integration run.
#[derive(Debug, Clone)]
pub struct Trajectory<const N: usize> {
    pub times: Vec<f64>,
    pub states: Vec<[f64; N]>,
    /// `dy/dt` at each stored node; present for integer-order runs, where it
    /// enables cubic Hermite dense output.
    pub derivatives: Option<Vec<[f64; N]>>,
    pub accepted: usize,
    pub rejected: usize,
    pub integrator: IntegratorKind,
    /// Smallest component seen in any accepted state before clipping.
    pub min_component: f64,
    /// One entry per accepted adaptive step.
    pub step_checks: Vec<StepCheck>,
}

impl<const N: usize> Trajectory<N> {
    pub(crate) fn start(kind: IntegratorKind, t0: f64, y0: [f64; N], f0: Option<[f64; N]>) -> Self {
        Self {
            times: vec![t0],
            states: vec![y0],
            derivatives: f0.map(|f| vec![f]),
            accepted: 0,
            rejected: 0,
            integrator: kind,
            min_component: y0.iter().copied().fold(f64::INFINITY, f64::min),
            step_checks: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn t0(&self) -> f64 {
        self.times[0]
    }

    pub fn t_end(&self) -> f64 {
        *self.times.last().expect("trajectory has at least one node")
    }

    pub fn final_state(&self) -> [f64; N] {
        *self
            .states
            .last()
            .expect("trajectory has at least one node")
    }

    /// Dense output at `t`, clamped to the stored interval. Cubic Hermite when
    /// derivatives are stored, linear otherwise.
    pub fn interpolate(&self, t: f64) -> [f64; N] {
        let n = self.times.len();
        if n == 1 || t <= self.times[0] {
            return self.states[0];
        }
        if t >= self.times[n - 1] {
            return self.states[n - 1];
        }
        // first index with times[i] > t
        let i = self.times.partition_point(|&x| x <= t);
        let (t0, t1) = (self.times[i - 1], self.times[i]);
        let (y0, y1) = (&self.states[i - 1], &self.states[i]);
        let h = t1 - t0;
        let s = (t - t0) / h;
        let mut out = [0.0; N];
        match &self.derivatives {
            Some(d) => {
                let (f0, f1) = (&d[i - 1], &d[i]);
                let s2 = s * s;
                let s3 = s2 * s;
                let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
                let h10 = s3 - 2.0 * s2 + s;
                let h01 = -2.0 * s3 + 3.0 * s2;
                let h11 = s3 - s2;
                for k in 0..N {
                    out[k] = h00 * y0[k] + h10 * h * f0[k] + h01 * y1[k] + h11 * h * f1[k];
                }
            }
            None => {
                for k in 0..N {
                    out[k] = y0[k] + s * (y1[k] - y0[k]);
                }
            }
        }
        out
    }

    pub fn resample(&self, grid: &[f64]) -> Vec<[f64; N]> {
        grid.iter().map(|&t| self.interpolate(t)).collect()
    }

    /// Writes `t,<header...>` then one row per stored node with 17
    /// significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W, header: &[&str; N]) -> io::Result<()> {
        write_rows(&mut w, header, &self.times, &self.states)
    }
}

/// Shared CSV writer for time-indexed vectors.
pub fn write_rows<W: Write, const N: usize>(
    w: &mut W,
    header: &[&str; N],
    times: &[f64],
    rows: &[[f64; N]],
) -> io::Result<()> {
    write!(w, "t")?;
    for h in header {
        write!(w, ",{h}")?;
    }
    writeln!(w)?;
    for (t, row) in times.iter().zip(rows) {
        write!(w, "{t:.16e}")?;
        for x in row {
            write!(w, ",{x:.16e}")?;
        }
        writeln!(w)?;
    }
    Ok(())
}
