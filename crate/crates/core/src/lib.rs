//! Standing waves of the 1-D nonlinear Schrödinger equation with an
//! attractive delta potential,
//!
//! ```text
//! i ∂ₜu = −∂ₓ²u − γ δ(x) u − |u|^{p−1} u,
//! ```
//!
//! their stability thresholds, discrete functionals on a grid, and a
//! split-step integrator for blowup experiments.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod evolve;
pub mod format;
pub mod grid;
pub mod quadrature;
pub mod roots;
pub mod soliton;
pub mod special_integrals;
pub mod thresholds;
pub mod tridiag;

pub use error::{Error, Result};
