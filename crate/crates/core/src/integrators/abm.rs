use statrs::function::gamma::gamma;

use super::{check_interval, IntegratorKind, OdeSystem, SolveError, Trajectory};
use crate::error::FailureKind;

/// Fractional Adams–Bashforth–Moulton predictor–corrector for the Caputo
/// problem `D^α y = f(t, y)`, `y(t0) = y0`, on a uniform grid of `n_steps`
/// intervals.
///
/// Predictor: product-rectangle rule for the Volterra form
/// `y(t) = y0 + Γ(α)⁻¹ ∫ (t−τ)^{α−1} f dτ`. Corrector: product-trapezoid rule,
/// one correction per step (PECE). The whole history enters every step.
/// At `α = 1` this reduces to Heun's method.
pub fn abm_fractional_solve<const N: usize, S: OdeSystem<N>>(
    system: &S,
    y0: [f64; N],
    t0: f64,
    t_end: f64,
    alpha: f64,
    n_steps: usize,
) -> Result<Trajectory<N>, SolveError<N>> {
    check_interval(&y0, t0, t_end)?;
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(SolveError::Invalid(format!(
            "fractional order must lie in (0, 1], got {alpha}"
        )));
    }
    if n_steps < 2 {
        return Err(SolveError::Invalid(format!(
            "need at least 2 steps, got {n_steps}"
        )));
    }

    let h = (t_end - t0) / n_steps as f64;
    let ha = h.powf(alpha);
    let pred_scale = ha / gamma(alpha + 1.0);
    let corr_scale = ha / gamma(alpha + 2.0);
    let integer_order = alpha == 1.0;

    // b[k] weights history node n-k in the predictor, c[k] in the corrector
    // (for nodes j >= 1).
    let b: Vec<f64> = (0..n_steps)
        .map(|k| {
            let k = k as f64;
            (k + 1.0).powf(alpha) - k.powf(alpha)
        })
        .collect();
    let ap1 = alpha + 1.0;
    let c: Vec<f64> = (0..n_steps)
        .map(|k| {
            let k = k as f64;
            (k + 2.0).powf(ap1) + k.powf(ap1) - 2.0 * (k + 1.0).powf(ap1)
        })
        .collect();

    let mut traj = Trajectory::start(IntegratorKind::Abm, t0, y0, None);
    traj.times.reserve(n_steps);
    traj.states.reserve(n_steps);
    let fail = |kind: FailureKind, traj: Trajectory<N>| SolveError::Failed {
        kind,
        partial: Box::new(traj),
    };

    let mut history: Vec<[f64; N]> = Vec::with_capacity(n_steps + 1);
    match system.rhs(t0, &y0) {
        Ok(f) => history.push(f),
        Err(e) => return Err(fail(FailureKind::Rhs(e.to_string()), traj)),
    }

    for n in 0..n_steps {
        let t_next = if n + 1 == n_steps {
            t_end
        } else {
            t0 + (n + 1) as f64 * h
        };

        let mut pred = [0.0; N];
        let mut corr = [0.0; N];
        for (j, f) in history.iter().enumerate() {
            let bw = b[n - j];
            let cw = if j == 0 {
                let nf = n as f64;
                nf.powf(ap1) - (nf - alpha) * (nf + 1.0).powf(alpha)
            } else {
                c[n - j]
            };
            for i in 0..N {
                pred[i] += bw * f[i];
                corr[i] += cw * f[i];
            }
        }
        let mut y_pred = y0;
        for i in 0..N {
            y_pred[i] += pred_scale * pred[i];
        }
        let f_pred = match system.rhs(t_next, &y_pred) {
            Ok(f) => f,
            Err(e) => return Err(fail(FailureKind::Rhs(e.to_string()), traj)),
        };
        let mut y_new = y0;
        for i in 0..N {
            y_new[i] += corr_scale * (f_pred[i] + corr[i]);
        }
        if y_new.iter().any(|x| !x.is_finite()) {
            return Err(fail(FailureKind::NonFinite, traj));
        }
        let raw_min = y_new.iter().copied().fold(f64::INFINITY, f64::min);
        traj.min_component = traj.min_component.min(raw_min);
        if let Err((component, value)) = system.admit(&mut y_new) {
            return Err(fail(FailureKind::NegativeState { component, value }, traj));
        }
        let f_new = match system.rhs(t_next, &y_new) {
            Ok(f) => f,
            Err(e) => return Err(fail(FailureKind::Rhs(e.to_string()), traj)),
        };
        history.push(f_new);
        traj.times.push(t_next);
        traj.states.push(y_new);
        traj.accepted += 1;
    }
    if integer_order {
        traj.derivatives = Some(history);
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrators::FnSystem;

    #[test]
    fn zero_dynamics_stay_constant() {
        let sys = FnSystem(|_t: f64, _y: &[f64; 2]| Ok([0.0; 2]));
        let tr = abm_fractional_solve(&sys, [3.0, 4.0], 0.0, 2.0, 0.7, 50).unwrap();
        assert!(tr.states.iter().all(|s| *s == [3.0, 4.0]));
        assert_eq!(tr.len(), 51);
        assert_eq!(tr.t_end(), 2.0);
    }

    #[test]
    fn integer_order_matches_exponential() {
        let sys = FnSystem(|_t: f64, y: &[f64; 1]| Ok([-y[0]]));
        let tr = abm_fractional_solve(&sys, [1.0], 0.0, 1.0, 1.0, 1000).unwrap();
        assert!((tr.final_state()[0] - (-1.0f64).exp()).abs() < 1e-6);
        assert!(tr.derivatives.is_some());
    }

    #[test]
    fn fractional_power_law_forcing() {
        // D^α y = Γ(2)/Γ(2-α) t^{1-α} has the exact solution y = t
        let alpha = 0.6;
        let k = gamma(2.0) / gamma(2.0 - alpha);
        let sys = FnSystem(move |t: f64, _y: &[f64; 1]| Ok([k * t.powf(1.0 - alpha)]));
        let tr = abm_fractional_solve(&sys, [0.0], 0.0, 1.0, alpha, 400).unwrap();
        assert!((tr.final_state()[0] - 1.0).abs() < 1e-3);
        assert!(tr.derivatives.is_none());
    }

    #[test]
    fn invalid_order_and_steps() {
        let sys = FnSystem(|_t: f64, _y: &[f64; 1]| Ok([0.0]));
        for (alpha, n) in [(0.0, 10), (1.2, 10), (0.5, 1)] {
            assert!(matches!(
                abm_fractional_solve(&sys, [0.0], 0.0, 1.0, alpha, n),
                Err(SolveError::Invalid(_))
            ));
        }
    }
}
