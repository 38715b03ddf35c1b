//! Riesz means, counting functions and heat traces of shifted planar lattices.
//!
//! The lattice is `(N + σ) × (N + τ)` with `N = {1, 2, ...}` and shifts
//! `σ, τ > -1`. For an anisotropy `β > 0` each lattice point `(k₁, k₂)` has
//! the "eigenvalue" `(k₁ + σ)√β + (k₂ + τ)/√β`; the case `σ = τ = -1/2` is
//! the spectrum of the anisotropic harmonic oscillator (rescaled by 1/2).
//!
//! Modules:
//! - [`domain`]: shared value types and small numeric helpers.
//! - [`special`]: Bernoulli polynomials, Hurwitz/periodic zeta, expansion coefficients.
//! - [`sums`]: direct evaluators (ground truth) and identity checks.
//! - [`asymptotics`]: the large-λ expansion of the Riesz mean and residual reports.
//! - [`bounds`]: the three-term upper bounds and the maximizer bracket.
//! - [`optimize`]: maximization over β of Riesz means and heat traces.
//! - [`cli`]: command-line front end.

pub mod asymptotics;
pub mod bounds;
pub mod cli;
pub mod domain;
mod error;
pub mod optimize;
pub mod quad;
pub mod special;
pub mod sums;

pub use domain::{
    fractional_part, rational_detect, Anisotropy, ResidualRecord, RieszOrder, ShiftClass,
    ShiftPair,
};
pub use error::{Error, Result};
