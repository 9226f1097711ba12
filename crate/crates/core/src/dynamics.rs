//! Classical two-soliton dynamics in dimensionless time `t' = 2|κ|t`:
//!
//! ```text
//! ṗ = −(1/M)(1 − p²)(1 − αp²) sin θ
//! θ̇ = Λp + (2p/M) cos θ (1 + α − 2αp²)
//! ```
//!
//! The pair `(p, θ)` is canonical with
//! `H(p, θ) = Λp²/2 − (1/M)(1 − p²)(1 − αp²) cos θ`, since `ṗ = −∂H/∂θ` and
//! `θ̇ = ∂H/∂p`. `H` is conserved along every trajectory and is used to
//! monitor integration accuracy.

use crate::error::{Error, Result};
use crate::numerics::{ode_solve, OdeSettings};
use crate::variational::MassSign;
use crate::ALPHA;

/// Slack allowed on `|p| ≤ 1` before a trajectory is declared corrupt;
/// excursions below it are clamped.
pub const P_CLAMP_SLACK: f64 = 1e-9;

/// Drift of `H` is measured relative to `max(|H₀|, 1)`.
const ENERGY_SCALE_FLOOR: f64 = 1.0;

/// Tolerance refinements `evolve` may try when the drift exceeds its budget.
const MAX_REFINEMENTS: u32 = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariationalState {
    /// Population imbalance `(N₂ − N₁)/N`.
    pub p: f64,
    /// Phase difference `θ₂ − θ₁`, unwrapped.
    pub theta: f64,
    pub lambda: f64,
    pub mass: MassSign,
}

impl VariationalState {
    pub fn new(p: f64, theta: f64, lambda: f64, mass: MassSign) -> Result<Self> {
        let s = Self {
            p,
            theta,
            lambda,
            mass,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p.is_finite() && self.p.abs() <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "|p| must not exceed 1, got {}",
                self.p
            )));
        }
        if !self.theta.is_finite() {
            return Err(Error::InvalidParameter("theta must be finite".into()));
        }
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "Λ must be positive, got {}",
                self.lambda
            )));
        }
        Ok(())
    }

    fn with(&self, p: f64, theta: f64) -> Self {
        Self { p, theta, ..*self }
    }
}

fn rhs(p: f64, theta: f64, lambda: f64, m: f64) -> (f64, f64) {
    let p2 = p * p;
    let dp = -(1.0 - p2) * (1.0 - ALPHA * p2) * theta.sin() / m;
    let dtheta = lambda * p + 2.0 * p / m * theta.cos() * (1.0 + ALPHA - 2.0 * ALPHA * p2);
    (dp, dtheta)
}

/// `(ṗ, θ̇)` at the given state.
pub fn eom_rhs(state: &VariationalState) -> (f64, f64) {
    rhs(state.p, state.theta, state.lambda, state.mass.value())
}

/// `H(p, θ) = Λp²/2 − (1/M)(1 − p²)(1 − αp²) cos θ`.
pub fn conserved_energy(state: &VariationalState) -> f64 {
    let p2 = state.p * state.p;
    0.5 * state.lambda * p2
        - (1.0 - p2) * (1.0 - ALPHA * p2) * state.theta.cos() / state.mass.value()
}

/// The equations of motion as an ODE right-hand side over `y = [p, θ]`.
pub fn vector_field(lambda: f64, mass: MassSign) -> impl Fn(f64, &[f64], &mut [f64]) + Copy {
    let m = mass.value();
    move |_t, y, dy| {
        let (dp, dtheta) = rhs(y[0], y[1], lambda, m);
        dy[0] = dp;
        dy[1] = dtheta;
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub t_prime: f64,
    pub state: VariationalState,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
    pub initial_energy: f64,
    /// `max |H(t') − H₀| / max(|H₀|, 1)` over the samples.
    pub energy_drift: f64,
    /// Relative tolerance actually used after any refinement.
    pub rel_tol_used: f64,
    pub refinements: u32,
}

impl Trajectory {
    pub fn last(&self) -> &TrajectorySample {
        self.samples
            .last()
            .expect("trajectory always holds the initial sample")
    }

    /// Per-sample drift relative to the same scale as [`Trajectory::energy_drift`].
    pub fn drift_at(&self, index: usize) -> f64 {
        (self.samples[index].energy - self.initial_energy).abs() / energy_scale(self.initial_energy)
    }
}

fn energy_scale(h0: f64) -> f64 {
    h0.abs().max(ENERGY_SCALE_FLOOR)
}

/// Energy-drift budget `evolve` aims for: ten times the relative tolerance.
pub fn energy_budget(settings: &OdeSettings) -> f64 {
    10.0 * settings.rel_tol
}

fn integrate_once(
    initial: &VariationalState,
    t_end: f64,
    settings: &OdeSettings,
) -> Result<Trajectory> {
    let field = vector_field(initial.lambda, initial.mass);
    let sol = ode_solve(field, &[initial.p, initial.theta], (0.0, t_end), settings)?;
    let h0 = conserved_energy(initial);
    let scale = energy_scale(h0);
    let mut samples = Vec::with_capacity(sol.len());
    let mut drift: f64 = 0.0;
    for (t, y) in sol.iter() {
        let mut p = y[0];
        if p.abs() > 1.0 {
            if p.abs() - 1.0 > P_CLAMP_SLACK {
                return Err(Error::Integrity { t, p_abs: p.abs() });
            }
            p = p.signum();
        }
        let state = initial.with(p, y[1]);
        let energy = conserved_energy(&state);
        drift = drift.max((energy - h0).abs() / scale);
        samples.push(TrajectorySample {
            t_prime: t,
            state,
            energy,
        });
    }
    Ok(Trajectory {
        samples,
        initial_energy: h0,
        energy_drift: drift,
        rel_tol_used: settings.rel_tol,
        refinements: 0,
    })
}

/// Integrate the equations of motion over `t' ∈ [0, t_prime_end]`.
///
/// If the drift of `H` exceeds [`energy_budget`] the integration is repeated
/// with both tolerances divided by ten, at most four times; the returned
/// trajectory records the drift actually reached.
pub fn evolve(
    initial: &VariationalState,
    t_prime_end: f64,
    settings: &OdeSettings,
) -> Result<Trajectory> {
    initial.validate()?;
    settings.validate()?;
    if !(t_prime_end.is_finite() && t_prime_end > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "t' end must be positive, got {t_prime_end}"
        )));
    }
    let budget = energy_budget(settings);
    let mut current = *settings;
    let mut refinements = 0;
    loop {
        let mut traj = integrate_once(initial, t_prime_end, &current)?;
        traj.refinements = refinements;
        if traj.energy_drift <= budget || refinements == MAX_REFINEMENTS {
            return Ok(traj);
        }
        refinements += 1;
        current = current.scaled(0.1);
    }
}
