use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("quadrature failed: estimate {estimate:e}, error bound {error_bound:e}")]
    QuadratureFailed { estimate: f64, error_bound: f64 },

    #[error("step size underflow at t = {t} (stiffness or singularity)")]
    StepSizeUnderflow { t: f64 },

    #[error("step budget of {max_steps} exhausted at t = {t}")]
    StepBudgetExhausted { t: f64, max_steps: usize },

    #[error("non-finite state at t = {t}")]
    NonFiniteState { t: f64 },

    #[error("trajectory integrity violated at t' = {t}: |p| = {p_abs}")]
    Integrity { t: f64, p_abs: f64 },

    #[error("cos(theta0) = {argument} is outside the N00N existence window [-1, 1]")]
    OutsideNoonWindow { argument: f64 },

    #[error("Theta = {theta} is beyond the critical value {theta_max}")]
    BeyondCriticalTheta { theta: f64, theta_max: f64 },

    #[error("uninformative state: {0}")]
    UninformativeState(String),

    #[error("non-informative operating point: mean {mean}, variance {variance}")]
    NonInformativeOperatingPoint { mean: f64, variance: f64 },

    #[error("particle number {n} outside the supported range 1..={max}")]
    DimensionOutOfRange { n: usize, max: usize },
}
