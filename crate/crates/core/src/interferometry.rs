//! Closed-form parity detection at the output of a Mach-Zehnder
//! interferometer fed with SCS or N00N states.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::states::{StateKind, SuperpositionSpec};

fn check_n(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("N must be at least 1".into()));
    }
    Ok(())
}

fn sign_of_power(exponent: u32) -> f64 {
    if exponent.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `(−1)^N cos[(φ − π/2) N|p₀|]`.
pub fn mean_parity_scs(n: u32, p0_abs: f64, phi: f64) -> Result<f64> {
    SuperpositionSpec::scs(n, p0_abs)?;
    Ok(sign_of_power(n) * ((phi - FRAC_PI_2) * n as f64 * p0_abs).cos())
}

/// Even `N`: `(−1)^{N/2} cos(φN + θ_N)`; odd `N`: `(−1)^{(N+1)/2} sin(φN + θ_N)`.
pub fn mean_parity_noon(n: u32, theta_n: f64, phi: f64) -> Result<f64> {
    check_n(n)?;
    let arg = phi * n as f64 + theta_n;
    Ok(if n.is_multiple_of(2) {
        sign_of_power(n / 2) * arg.cos()
    } else {
        sign_of_power(n.div_ceil(2)) * arg.sin()
    })
}

pub fn mean_parity(state: &SuperpositionSpec, phi: f64) -> Result<f64> {
    match state.kind {
        StateKind::Scs { p0_abs } => mean_parity_scs(state.n, p0_abs, phi),
        StateKind::Noon { theta_n } => mean_parity_noon(state.n, theta_n, phi),
    }
}

/// SCS: `sin²[(φ − π/2)N|p₀|]`; N00N: `sin²(φN + θ_N)` (even `N`) or
/// `cos²(φN + θ_N)` (odd `N`).
pub fn variance_parity(state: &SuperpositionSpec, phi: f64) -> Result<f64> {
    state.validate()?;
    let n = state.n as f64;
    Ok(match state.kind {
        StateKind::Scs { p0_abs } => ((phi - FRAC_PI_2) * n * p0_abs).sin().powi(2),
        StateKind::Noon { theta_n } if state.n.is_multiple_of(2) => {
            (phi * n + theta_n).sin().powi(2)
        }
        StateKind::Noon { theta_n } => (phi * n + theta_n).cos().powi(2),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScalingLabel {
    /// `σ_φ ≥ 1/√N`.
    Sql,
    /// `1/N < σ_φ < 1/√N`.
    SubSql,
    /// `σ_φ = 1/N`.
    Heisenberg,
}

impl ScalingLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            ScalingLabel::Sql => "SQL",
            ScalingLabel::SubSql => "SubSQL",
            ScalingLabel::Heisenberg => "Heisenberg",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSensitivity {
    pub sigma_phi: f64,
    pub scaling: ScalingLabel,
}

/// SCS: `σ_φ = 1/(N|p₀|)`; N00N: `σ_φ = 1/N`. Independent of `φ`.
pub fn phase_sensitivity(state: &SuperpositionSpec) -> Result<PhaseSensitivity> {
    state.validate()?;
    let n = state.n as f64;
    let sigma_phi = match state.kind {
        StateKind::Scs { p0_abs: 0.0 } => {
            return Err(Error::UninformativeState(
                "SCS with |p0| = 0 has a flat parity fringe".into(),
            ))
        }
        StateKind::Scs { p0_abs } => 1.0 / (n * p0_abs),
        StateKind::Noon { .. } => 1.0 / n,
    };
    let scaling = if (sigma_phi * n - 1.0).abs() <= 1e-12 {
        ScalingLabel::Heisenberg
    } else if sigma_phi * n.sqrt() >= 1.0 {
        ScalingLabel::Sql
    } else {
        ScalingLabel::SubSql
    };
    Ok(PhaseSensitivity { sigma_phi, scaling })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParityCurve {
    pub phi_grid: Vec<f64>,
    pub mean: Vec<f64>,
    pub variance: Vec<f64>,
    pub state: SuperpositionSpec,
}

pub fn parity_curve(state: &SuperpositionSpec, phi_grid: &[f64]) -> Result<ParityCurve> {
    if phi_grid.is_empty() {
        return Err(Error::InvalidParameter("phi grid is empty".into()));
    }
    let mean = phi_grid
        .iter()
        .map(|&phi| mean_parity(state, phi))
        .collect::<Result<Vec<_>>>()?;
    let variance = phi_grid
        .iter()
        .map(|&phi| variance_parity(state, phi))
        .collect::<Result<Vec<_>>>()?;
    Ok(ParityCurve {
        phi_grid: phi_grid.to_vec(),
        mean,
        variance,
        state: *state,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Fig3Series {
    Scs { p0_abs: f64 },
    Sql,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fig3Row {
    pub n: u32,
    pub series: Fig3Series,
    /// `√N σ_φ`.
    pub reduced_sigma: f64,
}

/// Reduced uncertainty `√N σ_φ = 1/(√N|p₀|)` for each `(N, p₀)`, followed
/// per `N` by the SQL reference `√N σ_φ = 1`.
pub fn fig3_data(n_values: &[u32], p0_values: &[f64]) -> Result<Vec<Fig3Row>> {
    if n_values.is_empty() || p0_values.is_empty() {
        return Err(Error::InvalidParameter(
            "N range and p0 list must be nonempty".into(),
        ));
    }
    let mut rows = Vec::with_capacity(n_values.len() * (p0_values.len() + 1));
    for &n in n_values {
        for &p0_abs in p0_values {
            let s = phase_sensitivity(&SuperpositionSpec::scs(n, p0_abs)?)?;
            rows.push(Fig3Row {
                n,
                series: Fig3Series::Scs { p0_abs },
                reduced_sigma: (n as f64).sqrt() * s.sigma_phi,
            });
        }
        rows.push(Fig3Row {
            n,
            series: Fig3Series::Sql,
            reduced_sigma: 1.0,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn scs_mean_examples() {
        assert_eq!(mean_parity_scs(3, 0.4, FRAC_PI_2).unwrap(), -1.0);
        assert!((mean_parity_scs(10, 0.6, FRAC_PI_2 + PI / 6.0).unwrap() + 1.0).abs() < 1e-14);
        for phi in [0.0, 1.0, 2.5] {
            assert_eq!(mean_parity_scs(5, 0.0, phi).unwrap(), -1.0);
        }
        assert!(mean_parity_scs(0, 0.5, 0.0).is_err());
    }

    #[test]
    fn noon_mean_examples() {
        assert_eq!(mean_parity_noon(2, 0.0, 0.0).unwrap(), -1.0);
        assert_eq!(mean_parity_noon(3, 0.0, 0.0).unwrap(), 0.0);
        assert!((mean_parity_noon(4, PI, PI / 4.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn variance_examples() {
        assert_eq!(
            variance_parity(&SuperpositionSpec::scs(6, 0.5).unwrap(), FRAC_PI_2).unwrap(),
            0.0
        );
        assert_eq!(
            variance_parity(&SuperpositionSpec::noon(2, 0.0).unwrap(), 0.0).unwrap(),
            0.0
        );
    }

    #[test]
    fn sensitivity_examples() {
        let s = phase_sensitivity(&SuperpositionSpec::noon(100, 0.3).unwrap()).unwrap();
        assert_eq!((s.sigma_phi, s.scaling), (0.01, ScalingLabel::Heisenberg));
        let s = phase_sensitivity(&SuperpositionSpec::scs(100, 1.0).unwrap()).unwrap();
        assert_eq!((s.sigma_phi, s.scaling), (0.01, ScalingLabel::Heisenberg));
        let s = phase_sensitivity(&SuperpositionSpec::scs(100, 0.5).unwrap()).unwrap();
        assert_eq!((s.sigma_phi, s.scaling), (0.02, ScalingLabel::SubSql));
        let s = phase_sensitivity(&SuperpositionSpec::scs(4, 0.3).unwrap()).unwrap();
        assert_eq!(s.scaling, ScalingLabel::Sql);
        assert!(matches!(
            phase_sensitivity(&SuperpositionSpec::scs(4, 0.0).unwrap()),
            Err(Error::UninformativeState(_))
        ));
    }

    #[test]
    fn fig3_examples() {
        let rows = fig3_data(&[4, 9], &[1.0, 0.1]).unwrap();
        assert_eq!(rows.len(), 6);
        assert_eq!(rows[0].reduced_sigma, 0.5);
        assert!(rows
            .iter()
            .filter(|r| r.series == Fig3Series::Sql)
            .all(|r| r.reduced_sigma == 1.0));
        // p0 = 0.1 loses to SQL below N = 100.
        assert!(rows
            .iter()
            .filter(|r| r.series == Fig3Series::Scs { p0_abs: 0.1 })
            .all(|r| r.reduced_sigma > 1.0));
        assert!(fig3_data(&[], &[0.5]).is_err());
    }

    #[test]
    fn curve_shape() {
        let grid: Vec<f64> = (0..50).map(|k| k as f64 * 0.1).collect();
        let c = parity_curve(&SuperpositionSpec::noon(5, 1.2).unwrap(), &grid).unwrap();
        assert_eq!(c.mean.len(), 50);
        assert!(parity_curve(&SuperpositionSpec::noon(5, 1.2).unwrap(), &[]).is_err());
    }

    proptest! {
        #[test]
        fn parity_involution(n in 1u32..300, p0 in 0.0f64..=1.0, th in -20.0f64..20.0, phi in -10.0f64..10.0) {
            for spec in [SuperpositionSpec::scs(n, p0).unwrap(), SuperpositionSpec::noon(n, th).unwrap()] {
                let m = mean_parity(&spec, phi).unwrap();
                let v = variance_parity(&spec, phi).unwrap();
                prop_assert!((m * m + v - 1.0).abs() <= 1e-12);
                prop_assert!(m.abs() <= 1.0);
            }
        }

        #[test]
        fn scs_period(n in 1u32..100, p0 in 0.05f64..=1.0, phi in -3.0f64..3.0) {
            let period = 2.0 * PI / (n as f64 * p0);
            let a = mean_parity_scs(n, p0, phi).unwrap();
            let b = mean_parity_scs(n, p0, phi + period).unwrap();
            prop_assert!((a - b).abs() <= 1e-9);
        }
    }
}
