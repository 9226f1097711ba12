//! Estimation of the nonlinear parameter `Θ = Λ/N² = U²/(16|κ|)` with a
//! N00N state whose relative phase is `θ_N = N arccos(−ΘN²/(2(1−α)))`.
//!
//! Error propagation through `θ_N(Θ)` gives
//! `σ_Θ = 2(1−α)√(1 − x²)/N³`, `x = ΘN²/(2(1−α))`, which reduces to
//! `2(1−α)/N³` at `Θ = 0` and falls to zero with divergent slope at the
//! window edge `x = 1`.

use std::f64::consts::FRAC_PI_2;

use crate::dicke_oracle::MeasurementResult;
use crate::error::{Error, Result};
use crate::interferometry::{mean_parity_noon, variance_parity};
use crate::states::SuperpositionSpec;
use crate::ALPHA;

/// Slack on `x ≤ 1` before `Θ` counts as beyond the window.
const WINDOW_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaEstimationSetup {
    pub n: u32,
    pub theta_param: f64,
    pub phi: f64,
    pub alpha: f64,
}

impl ThetaEstimationSetup {
    /// Setup at `φ = 0` with the frozen `α`.
    pub fn new(n: u32, theta_param: f64) -> Result<Self> {
        Self::with_alpha(n, theta_param, ALPHA)
    }

    pub fn with_alpha(n: u32, theta_param: f64, alpha: f64) -> Result<Self> {
        let setup = Self {
            n,
            theta_param,
            phi: 0.0,
            alpha,
        };
        setup.validate()?;
        Ok(setup)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParameter("N must be at least 1".into()));
        }
        if !(self.theta_param.is_finite() && self.theta_param >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "Theta must be finite and non-negative, got {}",
                self.theta_param
            )));
        }
        if !(self.alpha.is_finite() && self.alpha < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha must be below 1, got {}",
                self.alpha
            )));
        }
        if !self.phi.is_finite() {
            return Err(Error::InvalidParameter("phi must be finite".into()));
        }
        Ok(())
    }

    /// Window edge `Θ_max = 2(1−α)/N²`.
    pub fn theta_max(&self) -> f64 {
        theta_max(self.n, self.alpha)
    }

    /// `x = ΘN²/(2(1−α)) = Θ/Θ_max`.
    pub fn window_fraction(&self) -> f64 {
        self.theta_param / self.theta_max()
    }

    fn checked_fraction(&self) -> Result<f64> {
        self.validate()?;
        let x = self.window_fraction();
        if x > 1.0 + WINDOW_SLACK {
            return Err(Error::BeyondCriticalTheta {
                theta: self.theta_param,
                theta_max: self.theta_max(),
            });
        }
        Ok(x.min(1.0))
    }
}

pub fn theta_max(n: u32, alpha: f64) -> f64 {
    2.0 * (1.0 - alpha) / (n as f64 * n as f64)
}

/// `θ_N = N arccos(−ΘN²/(2(1−α)))`.
pub fn theta_n_of_theta(setup: &ThetaEstimationSetup) -> Result<f64> {
    let x = setup.checked_fraction()?;
    Ok(setup.n as f64 * (-x).acos())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaylorCheck {
    pub exact: f64,
    pub linear: f64,
    pub residual: f64,
}

/// Compares `θ_N` with its expansion `πN/2 + N³Θ/(2(1−α))`.
pub fn taylor_check(setup: &ThetaEstimationSetup) -> Result<TaylorCheck> {
    let exact = theta_n_of_theta(setup)?;
    let n = setup.n as f64;
    let linear = FRAC_PI_2 * n + n.powi(3) * setup.theta_param / (2.0 * (1.0 - setup.alpha));
    Ok(TaylorCheck {
        exact,
        linear,
        residual: exact - linear,
    })
}

/// Parity mean and variance of the N00N probe at `θ_N(Θ)`.
pub fn parity_stats_theta(setup: &ThetaEstimationSetup) -> Result<MeasurementResult> {
    let theta_n = theta_n_of_theta(setup)?;
    Ok(MeasurementResult {
        mean: mean_parity_noon(setup.n, theta_n, setup.phi)?,
        variance: variance_parity(&SuperpositionSpec::noon(setup.n, theta_n)?, setup.phi)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaTheta {
    pub sigma: f64,
    /// `Θ` sits on the window edge, where `σ_Θ = 0` and its slope diverges.
    pub at_boundary: bool,
}

/// `σ_Θ = 2(1−α)√(1 − x²)/N³`.
pub fn sigma_theta(setup: &ThetaEstimationSetup) -> Result<SigmaTheta> {
    let x = setup.checked_fraction()?;
    let at_boundary = x >= 1.0;
    let sigma = if at_boundary {
        0.0
    } else {
        sigma_theta_linear(setup) * (1.0 - x * x).sqrt()
    };
    Ok(SigmaTheta { sigma, at_boundary })
}

/// Small-`Θ` value `2(1−α)/N³`.
pub fn sigma_theta_linear(setup: &ThetaEstimationSetup) -> f64 {
    2.0 * (1.0 - setup.alpha) / (setup.n as f64).powi(3)
}

/// `dσ_Θ/dΘ = −x/(N√(1 − x²))`; `−∞` at the window edge.
pub fn sigma_theta_slope(setup: &ThetaEstimationSetup) -> Result<f64> {
    let x = setup.checked_fraction()?;
    if x >= 1.0 {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(-x / (setup.n as f64 * (1.0 - x * x).sqrt()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fig4Row {
    pub n: u32,
    pub theta: f64,
    /// `None` beyond the window.
    pub sigma: Option<f64>,
    pub sigma_linear: f64,
    pub at_boundary: bool,
    /// `σ_Θ(N) < σ_Θ(1)`, when `N ≥ 2` and both exist.
    pub beats_single_particle: Option<bool>,
}

/// `σ_Θ(Θ)` for every `(N, Θ)`, ordered by `N` then `Θ`.
pub fn fig4_data(n_list: &[u32], theta_grid: &[f64]) -> Result<Vec<Fig4Row>> {
    fig4_data_with_alpha(n_list, theta_grid, ALPHA)
}

pub fn fig4_data_with_alpha(
    n_list: &[u32],
    theta_grid: &[f64],
    alpha: f64,
) -> Result<Vec<Fig4Row>> {
    if n_list.is_empty() || theta_grid.is_empty() {
        return Err(Error::InvalidParameter(
            "N list and Theta grid must be nonempty".into(),
        ));
    }
    let evaluate = |n: u32, theta: f64| -> Result<Option<SigmaTheta>> {
        match sigma_theta(&ThetaEstimationSetup::with_alpha(n, theta, alpha)?) {
            Ok(s) => Ok(Some(s)),
            Err(Error::BeyondCriticalTheta { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    };
    let mut rows = Vec::with_capacity(n_list.len() * theta_grid.len());
    for &n in n_list {
        for &theta in theta_grid {
            let setup = ThetaEstimationSetup::with_alpha(n, theta, alpha)?;
            let here = evaluate(n, theta)?;
            let beats_single_particle = match (n >= 2, here, evaluate(1, theta)?) {
                (true, Some(a), Some(b)) => Some(a.sigma < b.sigma),
                _ => None,
            };
            rows.push(Fig4Row {
                n,
                theta,
                sigma: here.map(|s| s.sigma),
                sigma_linear: sigma_theta_linear(&setup),
                at_boundary: here.is_some_and(|s| s.at_boundary),
                beats_single_particle,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn setup(n: u32, theta: f64) -> ThetaEstimationSetup {
        ThetaEstimationSetup::new(n, theta).unwrap()
    }

    #[test]
    fn theta_n_examples() {
        assert!((theta_n_of_theta(&setup(6, 0.0)).unwrap() - 3.0 * PI).abs() < 1e-15);
        let n = 5;
        assert!((theta_n_of_theta(&setup(n, 1.58 / 25.0)).unwrap() - 5.0 * PI).abs() < 1e-6);
        assert!((theta_n_of_theta(&setup(2, 0.395)).unwrap() - 2.0 * PI).abs() < 1e-6);
        assert!(matches!(
            theta_n_of_theta(&setup(2, 0.4)),
            Err(Error::BeyondCriticalTheta { .. })
        ));
        assert!(ThetaEstimationSetup::new(2, -0.1).is_err());
    }

    #[test]
    fn taylor_examples() {
        assert_eq!(taylor_check(&setup(4, 0.0)).unwrap().residual, 0.0);
        let t = taylor_check(&setup(4, 1e-3)).unwrap();
        assert!((t.linear - (2.0 * PI + 0.064 / 1.58)).abs() < 1e-14);
        let r1 = taylor_check(&setup(4, 1e-4)).unwrap().residual;
        let r2 = taylor_check(&setup(4, 2e-4)).unwrap().residual;
        assert!((r2 / r1 / 8.0 - 1.0).abs() < 0.1, "{}", r2 / r1);
    }

    #[test]
    fn parity_stats_examples() {
        let r = parity_stats_theta(&setup(2, 0.0)).unwrap();
        assert!((r.mean - 1.0).abs() < 1e-15 && r.variance < 1e-30);
        let r = parity_stats_theta(&setup(3, 0.0)).unwrap();
        assert!((r.mean + 1.0).abs() < 1e-15 && r.variance < 1e-30);
        let r = parity_stats_theta(&setup(5, 0.03)).unwrap();
        assert!((r.mean * r.mean + r.variance - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sigma_examples() {
        assert!((sigma_theta(&setup(2, 0.0)).unwrap().sigma - 0.1975).abs() < 1e-15);
        assert!((sigma_theta(&setup(1, 0.0)).unwrap().sigma - 1.58).abs() < 1e-15);
        assert!((sigma_theta(&setup(4, 0.0)).unwrap().sigma - 0.0246875).abs() < 1e-15);
        let edge = sigma_theta(&setup(2, theta_max(2, ALPHA))).unwrap();
        assert_eq!((edge.sigma, edge.at_boundary), (0.0, true));
        assert_eq!(
            sigma_theta_slope(&setup(2, theta_max(2, ALPHA))).unwrap(),
            f64::NEG_INFINITY
        );
        assert_eq!(sigma_theta_slope(&setup(2, 0.0)).unwrap(), 0.0);
    }

    #[test]
    fn super_heisenberg_scaling() {
        for n in 1..=10u32 {
            let s = sigma_theta(&setup(n, 0.0)).unwrap().sigma;
            assert!((s * (n as f64).powi(3) - 1.58).abs() < 1e-13, "N = {n}");
        }
    }

    #[test]
    fn sigma_decreases_across_window() {
        for n in 1..=6u32 {
            let tm = theta_max(n, ALPHA);
            let values: Vec<f64> = (0..=200)
                .map(|k| sigma_theta(&setup(n, tm * k as f64 / 200.0)).unwrap().sigma)
                .collect();
            assert!(values.windows(2).all(|w| w[1] < w[0]));
            assert_eq!(*values.last().unwrap(), 0.0);
        }
    }

    #[test]
    fn fig4_rows() {
        let grid: Vec<f64> = (0..=40).map(|k| 0.01 * k as f64).collect();
        let rows = fig4_data(&[1, 2, 3], &grid).unwrap();
        assert_eq!(rows.len(), 3 * grid.len());
        for r in &rows {
            if r.n >= 2 && r.sigma.is_some() {
                assert_eq!(r.beats_single_particle, Some(true));
            }
            if r.theta > theta_max(r.n, ALPHA) {
                assert!(r.sigma.is_none());
            }
        }
        assert!(rows
            .iter()
            .filter(|r| r.n == 1)
            .all(|r| r.beats_single_particle.is_none()));
        assert!(fig4_data(&[1], &[]).is_err());
    }
}
