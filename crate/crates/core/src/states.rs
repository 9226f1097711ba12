//! Schrödinger-cat (SCS) and N00N superpositions of the stationary soliton
//! states, their overlap diagnostics, and their Dicke-basis form.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{integrate_line, QuadratureSettings};
use crate::ALPHA;

/// Slack on `|Λ/(2(1−α))| ≤ 1` before a N00N phase is rejected.
const NOON_WINDOW_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateKind {
    /// Cat state with branch imbalances `±|p₀|`.
    Scs { p0_abs: f64 },
    /// N00N state with relative phase `θ_N` (kept unreduced).
    Noon { theta_n: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuperpositionSpec {
    pub kind: StateKind,
    pub n: u32,
    /// Coupling the state was prepared at, when known.
    pub lambda: Option<f64>,
}

impl SuperpositionSpec {
    pub fn scs(n: u32, p0_abs: f64) -> Result<Self> {
        let spec = Self {
            kind: StateKind::Scs { p0_abs },
            n,
            lambda: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn noon(n: u32, theta_n: f64) -> Result<Self> {
        let spec = Self {
            kind: StateKind::Noon { theta_n },
            n,
            lambda: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// N00N state prepared on the Set-2 branch at coupling `Λ`.
    pub fn noon_at_lambda(n: u32, lambda: f64) -> Result<Self> {
        let theta_n = theta_noon(lambda, n)?;
        Ok(Self {
            lambda: Some(lambda),
            ..Self::noon(n, theta_n)?
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParameter("N must be at least 1".into()));
        }
        match self.kind {
            StateKind::Scs { p0_abs } => check_p0(p0_abs),
            StateKind::Noon { theta_n } if !theta_n.is_finite() => {
                Err(Error::InvalidParameter("theta_N must be finite".into()))
            }
            StateKind::Noon { .. } => Ok(()),
        }
    }
}

fn check_p0(p0_abs: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p0_abs) {
        return Err(Error::InvalidParameter(format!(
            "|p0| must lie in [0, 1], got {p0_abs}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OverlapMode {
    ExactQuadrature,
    Parabolic,
}

/// Single-particle branch overlap
/// `X = (1 − p₀²)/2 ∫ dx/(cosh x + cosh p₀x)`, or its parabolic form
/// `(1 − p₀²)(1 − αp₀²)`.
pub fn overlap_x(p0_abs: f64, mode: OverlapMode) -> Result<f64> {
    overlap_x_with(p0_abs, mode, &QuadratureSettings::default())
}

pub fn overlap_x_with(
    p0_abs: f64,
    mode: OverlapMode,
    settings: &QuadratureSettings,
) -> Result<f64> {
    check_p0(p0_abs)?;
    let p2 = p0_abs * p0_abs;
    match mode {
        OverlapMode::Parabolic => Ok((1.0 - p2) * (1.0 - ALPHA * p2)),
        OverlapMode::ExactQuadrature => {
            if p0_abs == 1.0 {
                return Ok(0.0);
            }
            let integral = integrate_line(|x| 1.0 / (x.cosh() + (p0_abs * x).cosh()), settings)?;
            Ok(0.5 * (1.0 - p2) * integral)
        }
    }
}

/// `ln ε = N ln X` with the parabolic `X`; `−∞` when `X = 0`.
pub fn ln_branch_overlap(p0_abs: f64, n: u32) -> Result<f64> {
    let x = overlap_x(p0_abs, OverlapMode::Parabolic)?;
    Ok(if x == 0.0 {
        f64::NEG_INFINITY
    } else {
        n as f64 * x.ln()
    })
}

/// Cat size `1/ε = X^(−N)`; `+∞` when `X = 0` or when the value overflows.
pub fn cat_size(p0_abs: f64, n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("N must be at least 1".into()));
    }
    Ok((-ln_branch_overlap(p0_abs, n)?).exp())
}

/// `C = [2(1 + X^N)]^(−1/2)`.
pub fn scs_normalization(p0_abs: f64, n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("N must be at least 1".into()));
    }
    let eps = ln_branch_overlap(p0_abs, n)?.exp();
    Ok((2.0 * (1.0 + eps)).powf(-0.5))
}

/// `θ_N = N arccos(−Λ/(2(1−α)))`, principal branch, unreduced.
pub fn theta_noon(lambda: f64, n: u32) -> Result<f64> {
    theta_noon_with_alpha(lambda, n, ALPHA)
}

/// [`theta_noon`] with an explicit overlap coefficient `α`.
pub fn theta_noon_with_alpha(lambda: f64, n: u32, alpha: f64) -> Result<f64> {
    let argument = -lambda / (2.0 * (1.0 - alpha));
    if !argument.is_finite() || argument.abs() > 1.0 + NOON_WINDOW_SLACK {
        return Err(Error::OutsideNoonWindow { argument });
    }
    Ok(n as f64 * argument.clamp(-1.0, 1.0).acos())
}

/// Normalized state over the Dicke basis `|j, m⟩`, `j = N/2`; index `k`
/// holds `m = k − j`.
#[derive(Debug, Clone, PartialEq)]
pub struct DickeVector {
    n: u32,
    amplitudes: Vec<Complex64>,
}

impl DickeVector {
    /// Wraps amplitudes, checking length and normalization (to 1e−12).
    pub fn new(n: u32, amplitudes: Vec<Complex64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("N must be at least 1".into()));
        }
        if amplitudes.len() != n as usize + 1 {
            return Err(Error::InvalidParameter(format!(
                "expected {} amplitudes for N = {n}, got {}",
                n + 1,
                amplitudes.len()
            )));
        }
        let v = Self { n, amplitudes };
        let norm = v.norm_sqr();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "state is not normalized: |ψ|² = {norm}"
            )));
        }
        Ok(v)
    }

    /// Rescales arbitrary non-zero amplitudes to unit norm.
    pub fn normalized(n: u32, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidParameter(
                "cannot normalize a zero or non-finite state".into(),
            ));
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Self::new(n, amplitudes)
    }

    /// Basis state `|j, m⟩` with `m = index − j`.
    pub fn basis(n: u32, index: usize) -> Result<Self> {
        let mut amps = vec![Complex64::new(0.0, 0.0); n as usize + 1];
        let slot = amps.get_mut(index).ok_or_else(|| {
            Error::InvalidParameter(format!("basis index {index} out of range for N = {n}"))
        })?;
        *slot = Complex64::new(1.0, 0.0);
        Self::new(n, amps)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn j(&self) -> f64 {
        self.n as f64 / 2.0
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Magnetic quantum number of basis index `k`.
    pub fn m_of(&self, index: usize) -> f64 {
        index as f64 - self.j()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }
}

/// Dicke index `k` (so `m₀ = k − j`) of the SCS branch `|j, +m₀⟩`, with
/// `m₀` the allowed value nearest `j|p₀|`, ties toward `+∞`.
pub fn scs_dicke_index(n: u32, p0_abs: f64) -> Result<usize> {
    check_p0(p0_abs)?;
    let j = n as f64 / 2.0;
    let k = (j * p0_abs + j + 0.5).floor() as usize;
    Ok(k.min(n as usize))
}

/// Dicke-basis form of an SCS or N00N state.
///
/// N00N: `(|j,−j⟩ + e^{−iθ_N}|j,j⟩)/√2`. SCS: `(|j,−m₀⟩ + |j,m₀⟩)/√2`,
/// collapsing to `|j,0⟩` when `m₀ = 0`.
pub fn to_dicke(spec: &SuperpositionSpec) -> Result<DickeVector> {
    spec.validate()?;
    let n = spec.n;
    let dim = n as usize + 1;
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    match spec.kind {
        StateKind::Noon { theta_n } => {
            amps[0] = Complex64::new(FRAC_1_SQRT_2, 0.0);
            amps[dim - 1] = Complex64::from_polar(FRAC_1_SQRT_2, -theta_n);
        }
        StateKind::Scs { p0_abs } => {
            let k = scs_dicke_index(n, p0_abs)?;
            let mirror = n as usize - k;
            if k == mirror {
                amps[k] = Complex64::new(1.0, 0.0);
            } else {
                amps[k] = Complex64::new(FRAC_1_SQRT_2, 0.0);
                amps[mirror] = Complex64::new(FRAC_1_SQRT_2, 0.0);
            }
        }
    }
    DickeVector::new(n, amps)
}
