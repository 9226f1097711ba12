//! Closed-form nontrivial fixed points of the two-soliton equations of motion.
//!
//! * Set 1 (cat branch): `p₀² = (1 + α − Λ/2)/(2α)`, `cos θ₀ = −M`, for
//!   `Λ ∈ [2(1−α), 2(1+α)]`.
//! * Set 2 (N00N branch): `p₀² = 1`, `cos θ₀ = −MΛ/(2(1−α))`, for
//!   `Λ ∈ [0, 2(1−α)]`.
//!
//! Both branches meet at `Λ_cr = 2(1−α)` with `p₀² = 1`, `cos θ₀ = −M`.

use std::f64::consts::PI;

use crate::variational::MassSign;
use crate::ALPHA;

/// Absolute slack on the inclusive window edges, so that e.g. a literal
/// `1.58` is inside both windows despite `2(1 − 0.21)` rounding.
const WINDOW_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Set1,
    Set2,
}

impl Branch {
    pub fn label(self) -> &'static str {
        match self {
            Branch::Set1 => "set1",
            Branch::Set2 => "set2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryPoint {
    pub branch: Branch,
    pub p0: f64,
    /// Principal value in `[0, π]`.
    pub theta0: f64,
    pub lambda: f64,
    pub mass: MassSign,
}

/// `Λ_cr = 2(1 − α) ≈ 1.58`.
pub fn lambda_critical() -> f64 {
    2.0 * (1.0 - ALPHA)
}

/// Upper edge of the cat branch, `2(1 + α) ≈ 2.42`.
pub fn lambda_cat_upper() -> f64 {
    2.0 * (1.0 + ALPHA)
}

fn pair(branch: Branch, p0: f64, theta0: f64, lambda: f64, mass: MassSign) -> Vec<StationaryPoint> {
    [p0, -p0]
        .into_iter()
        .map(|p0| StationaryPoint {
            branch,
            p0,
            theta0,
            lambda,
            mass,
        })
        .collect()
}

/// Set-1 points `(±p₀, θ₀)`; empty outside `[2(1−α), 2(1+α)]`.
pub fn set1_solution(lambda: f64, mass: MassSign) -> Vec<StationaryPoint> {
    if !lambda.is_finite()
        || lambda < lambda_critical() - WINDOW_SLACK
        || lambda > lambda_cat_upper() + WINDOW_SLACK
    {
        return Vec::new();
    }
    let p0_sq = ((1.0 + ALPHA - 0.5 * lambda) / (2.0 * ALPHA)).clamp(0.0, 1.0);
    let theta0 = match mass {
        MassSign::Positive => PI,
        MassSign::Negative => 0.0,
    };
    pair(Branch::Set1, p0_sq.sqrt(), theta0, lambda, mass)
}

/// Set-2 points `(±1, θ₀)`; empty outside `[0, 2(1−α)]`.
pub fn set2_solution(lambda: f64, mass: MassSign) -> Vec<StationaryPoint> {
    if !lambda.is_finite() || lambda < -WINDOW_SLACK || lambda > lambda_critical() + WINDOW_SLACK {
        return Vec::new();
    }
    let cos_theta0 = (-mass.value() * lambda / lambda_critical()).clamp(-1.0, 1.0);
    pair(Branch::Set2, 1.0, cos_theta0.acos(), lambda, mass)
}

/// All nontrivial stationary points at `Λ`, Set 1 first.
pub fn stationary_points(lambda: f64, mass: MassSign) -> Vec<StationaryPoint> {
    let mut points = set1_solution(lambda, mass);
    points.extend(set2_solution(lambda, mass));
    points
}
