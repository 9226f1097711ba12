//! Variational dynamics of weakly coupled bright matter-wave solitons,
//! the Schrödinger-cat and N00N superpositions built on their stationary
//! states, and parity-detection Mach-Zehnder metrology with those states.
//!
//! Closed forms live in [`interferometry`] and [`nonlinear_metrology`];
//! [`dicke_oracle`] simulates the same measurements exactly in the
//! `(N+1)`-dimensional Dicke sector and serves as the reference they are
//! checked against.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dicke_oracle;
pub mod dynamics;
pub mod error;
pub mod interferometry;
pub mod nonlinear_metrology;
pub mod numerics;
pub mod states;
pub mod stationary;
pub mod variational;
pub mod verify;

pub use error::{Error, Result};
pub use stationary::lambda_critical;

/// Coefficient of the parabolic approximation `I(p) ≈ 1 − α p²`, frozen for
/// every downstream formula.
pub const ALPHA: f64 = 0.21;
