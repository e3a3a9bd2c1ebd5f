use super::{
    check_interval, norm2, IntegratorConfig, IntegratorKind, OdeSystem, SolveError, StepCheck,
    Trajectory,
};
use crate::error::FailureKind;

// Fehlberg 4(5) tableau.
const C: [f64; 6] = [0.0, 0.25, 3.0 / 8.0, 12.0 / 13.0, 1.0, 0.5];
const A2: [f64; 1] = [0.25];
const A3: [f64; 2] = [3.0 / 32.0, 9.0 / 32.0];
const A4: [f64; 3] = [1932.0 / 2197.0, -7200.0 / 2197.0, 7296.0 / 2197.0];
const A5: [f64; 4] = [439.0 / 216.0, -8.0, 3680.0 / 513.0, -845.0 / 4104.0];
const A6: [f64; 5] = [
    -8.0 / 27.0,
    2.0,
    -3544.0 / 2565.0,
    1859.0 / 4104.0,
    -11.0 / 40.0,
];
const B4: [f64; 6] = [
    25.0 / 216.0,
    0.0,
    1408.0 / 2565.0,
    2197.0 / 4104.0,
    -0.2,
    0.0,
];
const B5: [f64; 6] = [
    16.0 / 135.0,
    0.0,
    6656.0 / 12825.0,
    28561.0 / 56430.0,
    -9.0 / 50.0,
    2.0 / 55.0,
];

fn combine<const N: usize>(y: &[f64; N], h: f64, coeffs: &[f64], ks: &[[f64; N]]) -> [f64; N] {
    let mut out = *y;
    for (c, k) in coeffs.iter().zip(ks) {
        if *c != 0.0 {
            for i in 0..N {
                out[i] += h * c * k[i];
            }
        }
    }
    out
}

/// Adaptive Runge–Kutta–Fehlberg integration of `y' = f(t, y)` on
/// `[t0, t_end]`.
///
/// A step is accepted when `‖y5 − y4‖ ≤ rel_tol‖y5‖ + abs_tol` (Euclidean
/// norms) and the solution advances with the fifth-order value. The next step
/// is `safety · h · (bound/error)^error_exponent`, clamped to
/// `[h_min, h_max]`; the last step is shortened to land exactly on `t_end`.
pub fn rkf45_solve<const N: usize, S: OdeSystem<N>>(
    system: &S,
    y0: [f64; N],
    t0: f64,
    t_end: f64,
    cfg: &IntegratorConfig,
) -> Result<Trajectory<N>, SolveError<N>> {
    check_interval(&y0, t0, t_end)?;
    cfg.validate()
        .map_err(|e| SolveError::Invalid(e.to_string()))?;

    let mut y = y0;
    let mut t = t0;
    let mut traj = Trajectory::start(IntegratorKind::Rkf45, t0, y0, None);
    let fail = |kind: FailureKind, traj: Trajectory<N>| SolveError::Failed {
        kind,
        partial: Box::new(traj),
    };

    let mut k1 = match system.rhs(t, &y) {
        Ok(f) => f,
        Err(e) => return Err(fail(FailureKind::Rhs(e.to_string()), traj)),
    };
    traj.derivatives = Some(vec![k1]);

    let mut h = cfg.h_init;
    let mut steps = 0usize;
    while t < t_end {
        if steps >= cfg.max_steps {
            return Err(fail(FailureKind::MaxSteps(cfg.max_steps), traj));
        }
        steps += 1;

        let remaining = t_end - t;
        let last = h >= remaining;
        let h_try = if last { remaining } else { h };

        let stages = (|| -> crate::Result<[[f64; N]; 6]> {
            let mut k = [[0.0; N]; 6];
            k[0] = k1;
            k[1] = system.rhs(t + C[1] * h_try, &combine(&y, h_try, &A2, &k[..1]))?;
            k[2] = system.rhs(t + C[2] * h_try, &combine(&y, h_try, &A3, &k[..2]))?;
            k[3] = system.rhs(t + C[3] * h_try, &combine(&y, h_try, &A4, &k[..3]))?;
            k[4] = system.rhs(t + C[4] * h_try, &combine(&y, h_try, &A5, &k[..4]))?;
            k[5] = system.rhs(t + C[5] * h_try, &combine(&y, h_try, &A6, &k[..5]))?;
            Ok(k)
        })();
        let k = match stages {
            Ok(k) => k,
            Err(e) => return Err(fail(FailureKind::Rhs(e.to_string()), traj)),
        };

        let y4 = combine(&y, h_try, &B4, &k);
        let y5 = combine(&y, h_try, &B5, &k);
        if y5.iter().any(|x| !x.is_finite()) {
            return Err(fail(FailureKind::NonFinite, traj));
        }
        let mut diff = [0.0; N];
        for i in 0..N {
            diff[i] = y5[i] - y4[i];
        }
        let error = norm2(&diff);
        let bound = cfg.rel_tol * norm2(&y5) + cfg.abs_tol;
        let h_opt = if error > 0.0 {
            cfg.safety * h_try * (bound / error).powf(cfg.error_exponent)
        } else {
            cfg.h_max
        };

        if error <= bound {
            let mut y_new = y5;
            let raw_min = y_new.iter().copied().fold(f64::INFINITY, f64::min);
            traj.min_component = traj.min_component.min(raw_min);
            if let Err((component, value)) = system.admit(&mut y_new) {
                return Err(fail(FailureKind::NegativeState { component, value }, traj));
            }
            t = if last { t_end } else { t + h_try };
            y = y_new;
            k1 = match system.rhs(t, &y) {
                Ok(f) => f,
                Err(e) => return Err(fail(FailureKind::Rhs(e.to_string()), traj)),
            };
            traj.times.push(t);
            traj.states.push(y);
            if let Some(d) = traj.derivatives.as_mut() {
                d.push(k1);
            }
            traj.step_checks.push(StepCheck { error, bound });
            traj.accepted += 1;
            // a shortened final step should not shrink the controller's memory
            h = if last {
                h
            } else {
                h_opt.clamp(cfg.h_min, cfg.h_max)
            };
        } else {
            traj.rejected += 1;
            if h_try <= cfg.h_min {
                return Err(fail(
                    FailureKind::StepUnderflow {
                        h: h_try,
                        error,
                        bound,
                    },
                    traj,
                ));
            }
            h = h_opt.max(cfg.h_min);
        }
    }
    Ok(traj)
}
