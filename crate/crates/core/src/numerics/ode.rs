//! Explicit adaptive Runge-Kutta integration with the Dormand-Prince
//! 8(5,3) embedded pair.

use super::dop853_tableau::{A, C, E3_SHIFT, E5};
use crate::error::{Error, Result};

const STAGES: usize = 12;
const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 10.0;
const ERROR_EXPONENT: f64 = -1.0 / 8.0;
const MAX_STEPS: usize = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeSettings {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Upper bound on |h| in time units.
    pub max_step: f64,
}

impl Default for OdeSettings {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_step: 1.0,
        }
    }
}

impl OdeSettings {
    pub fn validate(&self) -> Result<()> {
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(self.rel_tol) || !positive(self.abs_tol) {
            return Err(Error::InvalidParameter(
                "ODE tolerances must be strictly positive".into(),
            ));
        }
        if !(self.max_step > 0.0) {
            return Err(Error::InvalidParameter("max_step must be positive".into()));
        }
        Ok(())
    }

    /// Same settings with both tolerances multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            rel_tol: self.rel_tol * factor,
            abs_tol: self.abs_tol * factor,
            ..*self
        }
    }
}

/// Accepted steps of an integration, including the initial point.
#[derive(Debug, Clone, PartialEq)]
pub struct OdeSolution {
    pub t: Vec<f64>,
    pub y: Vec<Vec<f64>>,
    pub rhs_evaluations: usize,
}

impl OdeSolution {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn last(&self) -> (f64, &[f64]) {
        let i = self.t.len() - 1;
        (self.t[i], &self.y[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &[f64])> {
        self.t.iter().copied().zip(self.y.iter().map(Vec::as_slice))
    }
}

fn rms(v: impl Iterator<Item = f64>, n: usize) -> f64 {
    (v.map(|x| x * x).sum::<f64>() / n as f64).sqrt()
}

fn initial_step<F>(
    rhs: &mut F,
    t0: f64,
    y0: &[f64],
    f0: &[f64],
    dir: f64,
    span: f64,
    s: &OdeSettings,
) -> f64
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    let n = y0.len();
    let scale: Vec<f64> = y0.iter().map(|y| s.abs_tol + y.abs() * s.rel_tol).collect();
    let d0 = rms(y0.iter().zip(&scale).map(|(y, sc)| y / sc), n);
    let d1 = rms(f0.iter().zip(&scale).map(|(f, sc)| f / sc), n);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    let y1: Vec<f64> = y0.iter().zip(f0).map(|(y, f)| y + h0 * dir * f).collect();
    let mut f1 = vec![0.0; n];
    rhs(t0 + h0 * dir, &y1, &mut f1);
    let d2 = rms(
        f1.iter()
            .zip(f0)
            .zip(&scale)
            .map(|((a, b), sc)| (a - b) / sc),
        n,
    ) / h0;
    let h1 = if d1 <= 1e-15 && d2 <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(1.0 / 8.0)
    };
    (100.0 * h0).min(h1).min(s.max_step).min(span)
}

/// Integrate `y' = rhs(t, y)` from `t_span.0` to `t_span.1` (either
/// direction), returning every accepted step.
pub fn ode_solve<F>(
    mut rhs: F,
    y0: &[f64],
    t_span: (f64, f64),
    settings: &OdeSettings,
) -> Result<OdeSolution>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    settings.validate()?;
    let (t0, t_end) = t_span;
    if !t0.is_finite() || !t_end.is_finite() {
        return Err(Error::InvalidParameter("time span must be finite".into()));
    }
    if y0.is_empty() || y0.iter().any(|y| !y.is_finite()) {
        return Err(Error::InvalidParameter(
            "initial state must be non-empty and finite".into(),
        ));
    }
    let n = y0.len();
    let mut solution = OdeSolution {
        t: vec![t0],
        y: vec![y0.to_vec()],
        rhs_evaluations: 0,
    };
    if t0 == t_end {
        return Ok(solution);
    }
    let dir = (t_end - t0).signum();

    let mut t = t0;
    let mut y = y0.to_vec();
    let mut f = vec![0.0; n];
    rhs(t, &y, &mut f);
    let mut evals = 1;
    let mut h_abs = initial_step(&mut rhs, t, &y, &f, dir, (t_end - t0).abs(), settings);
    evals += 1;

    let mut k = vec![vec![0.0; n]; STAGES + 1];
    let mut y_stage = vec![0.0; n];
    let mut y_new = vec![0.0; n];
    let mut f_new = vec![0.0; n];
    let mut steps = 0usize;

    while dir * (t_end - t) > 0.0 {
        let min_step = 10.0 * (next_toward(t, dir) - t).abs();
        h_abs = h_abs.min(settings.max_step).max(min_step);
        let mut rejected = false;
        loop {
            if h_abs < min_step {
                return Err(Error::StepSizeUnderflow { t });
            }
            let mut h = h_abs * dir;
            let mut t_new = t + h;
            if dir * (t_new - t_end) > 0.0 {
                t_new = t_end;
            }
            h = t_new - t;
            let step = h.abs();

            k[0].copy_from_slice(&f);
            for s in 1..STAGES {
                for i in 0..n {
                    let mut acc = 0.0;
                    for (j, kj) in k.iter().enumerate().take(s) {
                        acc += A[s][j] * kj[i];
                    }
                    y_stage[i] = y[i] + h * acc;
                }
                rhs(t + C[s] * h, &y_stage, &mut k[s]);
            }
            for i in 0..n {
                let mut acc = 0.0;
                for (j, kj) in k.iter().enumerate().take(STAGES) {
                    acc += A[STAGES][j] * kj[i];
                }
                y_new[i] = y[i] + h * acc;
            }
            rhs(t_new, &y_new, &mut f_new);
            k[STAGES].copy_from_slice(&f_new);
            evals += STAGES;

            if y_new.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFiniteState { t: t_new });
            }

            let mut err5_sq = 0.0;
            let mut err3_sq = 0.0;
            for i in 0..n {
                let scale = settings.abs_tol + y[i].abs().max(y_new[i].abs()) * settings.rel_tol;
                let mut e5 = 0.0;
                let mut e3 = 0.0;
                for j in 0..=STAGES {
                    e5 += E5[j] * k[j][i];
                    if j < STAGES {
                        e3 += (A[STAGES][j] - E3_SHIFT[j]) * k[j][i];
                    }
                }
                err5_sq += (e5 / scale).powi(2);
                err3_sq += (e3 / scale).powi(2);
            }
            let error_norm = if err5_sq == 0.0 && err3_sq == 0.0 {
                0.0
            } else {
                step * err5_sq / ((err5_sq + 0.01 * err3_sq) * n as f64).sqrt()
            };

            if error_norm < 1.0 {
                let mut factor = if error_norm == 0.0 {
                    MAX_FACTOR
                } else {
                    MAX_FACTOR.min(SAFETY * error_norm.powf(ERROR_EXPONENT))
                };
                if rejected {
                    factor = factor.min(1.0);
                }
                h_abs = step * factor;
                t = t_new;
                break;
            }
            h_abs = step * MIN_FACTOR.max(SAFETY * error_norm.powf(ERROR_EXPONENT));
            rejected = true;
        }

        std::mem::swap(&mut y, &mut y_new);
        std::mem::swap(&mut f, &mut f_new);
        solution.t.push(t);
        solution.y.push(y.clone());
        steps += 1;
        if steps >= MAX_STEPS {
            return Err(Error::StepBudgetExhausted {
                t,
                max_steps: MAX_STEPS,
            });
        }
    }
    solution.rhs_evaluations = evals;
    Ok(solution)
}

fn next_toward(t: f64, dir: f64) -> f64 {
    let bits = t.to_bits();
    if t == 0.0 {
        return f64::from_bits(1) * dir;
    }
    // Moving away from zero increments the magnitude bits.
    if (t > 0.0) == (dir > 0.0) {
        f64::from_bits(bits + 1)
    } else {
        f64::from_bits(bits - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn exponential_decay() {
        let s = OdeSettings::default();
        let sol = ode_solve(|_, y, dy| dy[0] = -y[0], &[1.0], (0.0, 1.0), &s).unwrap();
        let (t, y) = sol.last();
        assert_eq!(t, 1.0);
        assert!(
            ((y[0] - (-1f64).exp()) / (-1f64).exp()).abs() < s.rel_tol,
            "{}",
            y[0]
        );
    }

    #[test]
    fn harmonic_period_closure() {
        let s = OdeSettings::default();
        let sol = ode_solve(
            |_, y, dy| {
                dy[0] = y[1];
                dy[1] = -y[0];
            },
            &[1.0, 0.0],
            (0.0, 2.0 * PI),
            &s,
        )
        .unwrap();
        let (_, y) = sol.last();
        assert!((y[0] - 1.0).abs() < 1e-8 && y[1].abs() < 1e-8, "{y:?}");
    }

    #[test]
    fn backward_integration() {
        let s = OdeSettings::default();
        let sol = ode_solve(|_, y, dy| dy[0] = y[0], &[1.0], (0.0, -2.0), &s).unwrap();
        let (t, y) = sol.last();
        assert_eq!(t, -2.0);
        assert!((y[0] - (-2f64).exp()).abs() < 1e-11);
        assert!(sol.t.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn halved_tolerances_agree_within_coarse_tolerance() {
        let s = OdeSettings::default();
        let fine = s.scaled(0.5);
        let f = |t: f64, y: &[f64], dy: &mut [f64]| {
            dy[0] = y[1];
            dy[1] = -y[0] + 0.3 * t.cos();
        };
        let a = ode_solve(f, &[0.5, -0.2], (0.0, 10.0), &s).unwrap();
        let b = ode_solve(f, &[0.5, -0.2], (0.0, 10.0), &fine).unwrap();
        for (x, z) in a.last().1.iter().zip(b.last().1) {
            assert!(
                (x - z).abs() < s.rel_tol * x.abs().max(1.0) * 10.0,
                "{x} vs {z}"
            );
        }
    }

    #[test]
    fn max_step_is_respected() {
        let s = OdeSettings {
            max_step: 0.05,
            ..Default::default()
        };
        let sol = ode_solve(|_, _, dy| dy[0] = 1.0, &[0.0], (0.0, 1.0), &s).unwrap();
        assert!(sol.t.windows(2).all(|w| w[1] - w[0] <= 0.05 + 1e-15));
        assert!((sol.last().1[0] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn blow_up_is_reported() {
        // y' = y^2 from y(0)=1 blows up at t = 1.
        let err = ode_solve(
            |_, y, dy| dy[0] = y[0] * y[0],
            &[1.0],
            (0.0, 2.0),
            &OdeSettings::default(),
        )
        .unwrap_err();
        match err {
            Error::StepSizeUnderflow { t } | Error::NonFiniteState { t } => {
                assert!((t - 1.0).abs() < 1e-3, "{t}")
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn zero_length_span() {
        let sol = ode_solve(
            |_, _, dy| dy[0] = 1.0,
            &[3.0],
            (2.0, 2.0),
            &OdeSettings::default(),
        )
        .unwrap();
        assert_eq!(sol.len(), 1);
    }

    #[test]
    fn invalid_settings() {
        let s = OdeSettings {
            max_step: 0.0,
            ..Default::default()
        };
        assert!(ode_solve(|_, _, dy| dy[0] = 1.0, &[0.0], (0.0, 1.0), &s).is_err());
        let s = OdeSettings {
            rel_tol: -1.0,
            ..Default::default()
        };
        assert!(s.validate().is_err());
    }

    #[test]
    fn repeat_is_bit_identical() {
        let s = OdeSettings::default();
        let f = |_: f64, y: &[f64], dy: &mut [f64]| {
            dy[0] = y[1].sin();
            dy[1] = -y[0].cos() * y[1];
        };
        let a = ode_solve(f, &[0.3, 1.1], (0.0, 7.0), &s).unwrap();
        let b = ode_solve(f, &[0.3, 1.1], (0.0, 7.0), &s).unwrap();
        assert_eq!(a, b);
    }
}
