//! Sech-ansatz reduction of the two-well Lagrangian: soliton profiles, the
//! overlap integral `I(p)`, the parabolic coefficient and a numerical check
//! of the effective Lagrangian's potential terms.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{integrate_half_line, integrate_line, QuadratureSettings};
use crate::ALPHA;

/// Sign of the normalized effective mass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MassSign {
    Positive,
    Negative,
}

impl MassSign {
    pub fn value(self) -> f64 {
        match self {
            MassSign::Positive => 1.0,
            MassSign::Negative => -1.0,
        }
    }
}

impl TryFrom<i32> for MassSign {
    type Error = Error;

    fn try_from(m: i32) -> Result<Self> {
        match m {
            1 => Ok(MassSign::Positive),
            -1 => Ok(MassSign::Negative),
            other => Err(Error::InvalidParameter(format!(
                "mass sign must be ±1, got {other}"
            ))),
        }
    }
}

/// Physical parameters of the coupled-soliton model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Total particle number `N = N₁ + N₂`.
    pub n: u32,
    /// Magnitude of the two-body interaction.
    pub u: f64,
    /// Inter-well tunneling rate κ.
    pub kappa: f64,
    pub mass: MassSign,
}

impl ModelParams {
    pub fn new(n: u32, u: f64, kappa: f64, mass: MassSign) -> Result<Self> {
        let params = Self { n, u, kappa, mass };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_interaction()?;
        if !(self.kappa.is_finite() && self.kappa != 0.0) {
            return Err(Error::InvalidParameter(
                "kappa must be finite and non-zero".into(),
            ));
        }
        Ok(())
    }

    /// Checks everything except the tunneling rate.
    fn validate_interaction(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParameter("N must be at least 1".into()));
        }
        if !(self.u.is_finite() && self.u > 0.0) {
            return Err(Error::InvalidParameter(
                "U must be finite and positive".into(),
            ));
        }
        Ok(())
    }

    /// Signed interaction strength for which the sech profile is a bright
    /// soliton (`M·U < 0`).
    pub fn bright_soliton_u(&self) -> f64 {
        -self.mass.value() * self.u
    }
}

/// `Λ = U²N²/(16|κ|)`.
pub fn lambda_param(params: &ModelParams) -> Result<f64> {
    params.validate()?;
    let n = params.n as f64;
    Ok(params.u * params.u * n * n / (16.0 * params.kappa.abs()))
}

/// One bright soliton `Ψ_j(z) = (N_j/2)√|U| sech(N_j|U|z/2) e^{iMθ_j}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolitonProfile {
    /// Inverse width `N_j|U|/2`.
    pub amplitude_scale: f64,
    pub phase: f64,
    pub particle_count: f64,
    peak: f64,
    mass: MassSign,
}

impl SolitonProfile {
    pub fn peak(&self) -> f64 {
        self.peak
    }

    /// Real envelope `(N_j/2)√|U| sech(kz)`.
    pub fn envelope(&self, z: f64) -> f64 {
        if self.particle_count == 0.0 {
            return 0.0;
        }
        self.peak / (self.amplitude_scale * z).cosh()
    }

    /// Second z-derivative of the envelope: `A k² (sech − 2 sech³)`.
    pub fn envelope_second_derivative(&self, z: f64) -> f64 {
        if self.particle_count == 0.0 {
            return 0.0;
        }
        let k = self.amplitude_scale;
        let s = 1.0 / (k * z).cosh();
        self.peak * k * k * (s - 2.0 * s * s * s)
    }

    pub fn eval(&self, z: f64) -> Complex64 {
        Complex64::from_polar(self.envelope(z), self.mass.value() * self.phase)
    }

    pub fn density(&self, z: f64) -> f64 {
        self.envelope(z).powi(2)
    }

    /// `∫|Ψ|² dz` by quadrature; equals the particle count.
    pub fn norm(&self, settings: &QuadratureSettings) -> Result<f64> {
        if self.particle_count == 0.0 {
            return Ok(0.0);
        }
        integrate_line(|z| self.density(z), settings)
    }
}

pub fn soliton_profile(params: &ModelParams, n_j: f64, theta_j: f64) -> Result<SolitonProfile> {
    params.validate_interaction()?;
    if !(n_j.is_finite() && n_j >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "particle count must be non-negative, got {n_j}"
        )));
    }
    Ok(SolitonProfile {
        amplitude_scale: n_j * params.u / 2.0,
        phase: theta_j,
        particle_count: n_j,
        peak: 0.5 * n_j * params.u.sqrt(),
        mass: params.mass,
    })
}

/// `I(p) = ∫₀^∞ dz / (cosh²z + sinh²(pz))`.
pub fn overlap_i(p: f64, settings: &QuadratureSettings) -> Result<f64> {
    if !(p.is_finite() && p.abs() <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "|p| must not exceed 1, got {p}"
        )));
    }
    integrate_half_line(
        |z| 1.0 / (z.cosh().powi(2) + (z * p).sinh().powi(2)),
        settings,
    )
}

/// Parabolic model `1 − α p²` with the frozen α.
pub fn overlap_i_parabolic(p: f64) -> f64 {
    1.0 - ALPHA * p * p
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaFit {
    pub alpha: f64,
    /// `max |I(p) − (1 − α p²)|` over the fit grid, using the fitted α.
    pub max_residual: f64,
}

/// Least-squares α for `I(p) ≈ 1 − α p²` on a uniform grid over `[0, 1]`.
///
/// The intercept is pinned at 1 because `I(0) = 1` exactly, so the fit has
/// the closed form `α = Σ (1 − I(pᵢ)) pᵢ² / Σ pᵢ⁴`.
pub fn fit_alpha(grid_size: usize, settings: &QuadratureSettings) -> Result<AlphaFit> {
    if grid_size < 3 {
        return Err(Error::InvalidParameter(
            "alpha fit needs at least 3 grid points".into(),
        ));
    }
    let samples = (0..grid_size)
        .map(|k| {
            let p = k as f64 / (grid_size - 1) as f64;
            overlap_i(p, settings).map(|i| (p, i))
        })
        .collect::<Result<Vec<_>>>()?;
    let num: f64 = samples.iter().map(|(p, i)| (1.0 - i) * p * p).sum();
    let den: f64 = samples.iter().map(|(p, _)| p.powi(4)).sum();
    let alpha = num / den;
    let max_residual = samples
        .iter()
        .map(|(p, i)| (i - (1.0 - alpha * p * p)).abs())
        .fold(0.0, f64::max);
    Ok(AlphaFit {
        alpha,
        max_residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TermComparison {
    pub numeric: f64,
    pub analytic: f64,
}

impl TermComparison {
    pub fn abs_diff(&self) -> f64 {
        (self.numeric - self.analytic).abs()
    }

    pub fn rel_diff(&self) -> f64 {
        let scale = self.analytic.abs().max(self.numeric.abs());
        if scale == 0.0 {
            0.0
        } else {
            self.abs_diff() / scale
        }
    }
}

/// Numerical vs closed-form potential terms of the effective Lagrangian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LagrangianCheck {
    /// `−κ∫(Ψ₁*Ψ₂ + c.c.)dz` vs `−(4κN₁N₂/N) I(p) cos θ` (exact `I`).
    pub coupling: TermComparison,
    /// Closed-form coupling with the parabolic `I(p) ≈ 1 − αp²`.
    pub coupling_parabolic: f64,
    /// `Σⱼ ∫[(1/2M) Ψⱼ*Ψⱼ'' − (U/2)|Ψⱼ|⁴]dz` vs `(U²/24M)(N₁³ + N₂³)`.
    pub self_interaction: TermComparison,
    /// Quartic part `−(U/2)Σⱼ∫|Ψⱼ|⁴dz` alone.
    pub quartic_only: f64,
    /// Dispersion part `(1/2M)Σⱼ∫Ψⱼ*Ψⱼ''dz` alone.
    pub dispersion_only: f64,
}

/// Integrate the z-dependent energy terms of the Lagrangian density with the
/// sech ansatz and compare with the effective Lagrangian.
///
/// The `N³` coefficient `U²/24M` collects both the quartic interaction and
/// the dispersion term, with `U = −M|U|` (bright soliton); the two parts
/// are also returned separately.
pub fn effective_lagrangian_check(
    params: &ModelParams,
    n1: f64,
    n2: f64,
    theta: f64,
    settings: &QuadratureSettings,
) -> Result<LagrangianCheck> {
    params.validate_interaction()?;
    if !params.kappa.is_finite() {
        return Err(Error::InvalidParameter("kappa must be finite".into()));
    }
    if !(n1 >= 0.0 && n2 >= 0.0 && n1 + n2 > 0.0) {
        return Err(Error::InvalidParameter(
            "populations must be non-negative with a positive total".into(),
        ));
    }
    let m = params.mass.value();
    let kappa = params.kappa;
    let u_signed = params.bright_soliton_u();
    // θ = θ₂ − θ₁, so put the whole phase on the second well.
    let psi1 = soliton_profile(params, n1, 0.0)?;
    let psi2 = soliton_profile(params, n2, theta)?;

    let overlap = if n1 > 0.0 && n2 > 0.0 {
        integrate_line(|z| psi1.envelope(z) * psi2.envelope(z), settings)?
    } else {
        0.0
    };
    let relative_phase = (psi1.eval(0.0).conj() * psi2.eval(0.0)).arg();
    let coupling_numeric = if kappa == 0.0 {
        0.0
    } else {
        -2.0 * kappa * overlap * relative_phase.cos()
    };

    let n = n1 + n2;
    let p = (n2 - n1) / n;
    let prefactor = -4.0 * kappa * n1 * n2 / n * theta.cos();
    let coupling_analytic = prefactor * overlap_i(p, settings)?;
    let coupling_parabolic = prefactor * overlap_i_parabolic(p);

    let mut quartic = 0.0;
    let mut dispersion = 0.0;
    for psi in [&psi1, &psi2] {
        if psi.particle_count == 0.0 {
            continue;
        }
        quartic += integrate_line(|z| -0.5 * u_signed * psi.density(z).powi(2), settings)?;
        dispersion += integrate_line(
            |z| psi.envelope(z) * psi.envelope_second_derivative(z) / (2.0 * m),
            settings,
        )?;
    }
    let self_analytic = params.u * params.u / (24.0 * m) * (n1.powi(3) + n2.powi(3));

    Ok(LagrangianCheck {
        coupling: TermComparison {
            numeric: coupling_numeric,
            analytic: coupling_analytic,
        },
        coupling_parabolic,
        self_interaction: TermComparison {
            numeric: quartic + dispersion,
            analytic: self_analytic,
        },
        quartic_only: quartic,
        dispersion_only: dispersion,
    })
}
