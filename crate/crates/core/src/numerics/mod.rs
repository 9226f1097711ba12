//! General-purpose numerical kernels: line quadrature and an adaptive
//! explicit Runge-Kutta stepper.

mod dop853_tableau;
mod grid;
pub mod ode;
pub mod quadrature;

pub use grid::linspace;
pub use ode::{ode_solve, OdeSettings, OdeSolution};
pub use quadrature::{
    integrate_half_line, integrate_interval, integrate_line, truncation_point, QuadEstimate,
    QuadratureSettings,
};
