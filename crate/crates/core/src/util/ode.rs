//! Adaptive Dormand–Prince 5(4) integrator for small systems.

use crate::error::{Error, Result};

/// Right-hand side of an autonomous system y' = f(y).
pub trait OdeSystem {
    fn eval(&self, y: &[f64], dy: &mut [f64]) -> bool;
}

impl<F: Fn(&[f64], &mut [f64]) -> bool> OdeSystem for F {
    fn eval(&self, y: &[f64], dy: &mut [f64]) -> bool {
        self(y, dy)
    }
}

pub struct AdaptiveOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub h_init: f64,
    pub h_min: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        AdaptiveOptions {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            h_init: 1e-3,
            h_min: 1e-14,
            h_max: 0.5,
            max_steps: 2_000_000,
        }
    }
}

/// Outcome of a single accepted step.
pub enum StepControl {
    Continue,
    Stop,
}

const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrates y' = f(y) with adaptive step control, invoking `on_step(t, y)`
/// after every accepted step. Integration stops when `on_step` returns
/// [`StepControl::Stop`], the RHS reports an invalid state (domain exit),
/// or the step budget is exhausted.
pub fn integrate_adaptive<S: OdeSystem>(
    system: &S,
    y0: &[f64],
    t0: f64,
    opts: &AdaptiveOptions,
    mut on_step: impl FnMut(f64, &[f64]) -> StepControl,
) -> Result<(f64, Vec<f64>)> {
    let dim = y0.len();
    let mut y = y0.to_vec();
    let mut t = t0;
    let mut h = opts.h_init.min(opts.h_max);
    let mut k = vec![vec![0.0; dim]; 7];
    let mut ytmp = vec![0.0; dim];
    let mut y5 = vec![0.0; dim];

    if !system.eval(&y, &mut k[0]) {
        return Err(Error::DomainExit(y));
    }

    for _step in 0..opts.max_steps {
        // stage evaluations; k[0] holds f(y) from the previous accepted step
        let mut ok = true;
        for s in 1..7 {
            for i in 0..dim {
                let mut acc = 0.0;
                for (j, kj) in k.iter().enumerate().take(s) {
                    let a = if s < 7 && j < 6 { A[s - 1][j] } else { 0.0 };
                    acc += a * kj[i];
                }
                ytmp[i] = y[i] + h * acc;
            }
            let (head, tail) = k.split_at_mut(s);
            let _ = head;
            if !system.eval(&ytmp, &mut tail[0]) {
                ok = false;
                break;
            }
        }
        if !ok {
            // shrink into the domain; give up below h_min
            h *= 0.5;
            if h < opts.h_min {
                return Err(Error::DomainExit(ytmp.clone()));
            }
            continue;
        }

        let mut err = 0.0f64;
        for i in 0..dim {
            let mut s5 = 0.0;
            let mut s4 = 0.0;
            for j in 0..7 {
                s5 += B5[j] * k[j][i];
                s4 += B4[j] * k[j][i];
            }
            y5[i] = y[i] + h * s5;
            let sc = opts.abs_tol + opts.rel_tol * y[i].abs().max(y5[i].abs());
            let e = h * (s5 - s4) / sc;
            err += e * e;
        }
        err = (err / dim as f64).sqrt();

        if err <= 1.0 {
            t += h;
            y.copy_from_slice(&y5);
            // FSAL would reuse k[6]; recompute for clarity of domain checks
            if !system.eval(&y, &mut k[0]) {
                return Err(Error::DomainExit(y));
            }
            if let StepControl::Stop = on_step(t, &y) {
                return Ok((t, y));
            }
        }
        let fac = if err > 0.0 {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        } else {
            5.0
        };
        h = (h * fac).clamp(opts.h_min, opts.h_max);
    }
    Err(Error::StepBudget {
        steps: opts.max_steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn exponential_decay() {
        let sys = |y: &[f64], dy: &mut [f64]| {
            dy[0] = -y[0];
            true
        };
        let mut t_end = 0.0;
        let (t, y) = integrate_adaptive(
            &sys,
            &[1.0],
            0.0,
            &AdaptiveOptions::default(),
            |t, _| {
                if t >= 3.0 {
                    t_end = t;
                    StepControl::Stop
                } else {
                    StepControl::Continue
                }
            },
        )
        .unwrap();
        assert!(t >= 3.0);
        assert_relative_eq!(y[0], (-t).exp(), max_relative = 1e-8);
    }

    #[test]
    fn budget_error_reported() {
        let sys = |_: &[f64], dy: &mut [f64]| {
            dy[0] = 1.0;
            true
        };
        let opts = AdaptiveOptions {
            max_steps: 10,
            ..Default::default()
        };
        let r = integrate_adaptive(&sys, &[0.0], 0.0, &opts, |_, _| StepControl::Continue);
        assert!(matches!(r, Err(Error::StepBudget { .. })));
    }
}
