//! Small-time asymptotics of the Hartman-Watson integral
//!
//! ```text
//! θ(r,t) = r/√(2π³t) · e^{π²/(2t)} ∫₀^∞ e^{−ξ²/(2t)} e^{−r cosh ξ} sinh ξ sin(πξ/t) dξ
//! ```
//!
//! evaluated through its saddle-point expansion in ρ = r·t, together with
//! independent reference evaluators (oscillatory quadrature, Gerhold's
//! approximation) and the small-t density of the time average of a
//! geometric Brownian motion that the expansion feeds into.
//!
//! Modules:
//! - [`saddle`]: root solvers for all transcendental equations.
//! - [`hw_core`]: F, F', F'', G, g̃₂ and the assembled approximation θ̂.
//! - [`hw_reference`]: direct quadrature, Gerhold's formula, Bessel functions.
//! - [`gbm_density`]: rate function J(a), prefactor g(a,μ) and the density.

#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![cfg_attr(test, allow(clippy::excessive_precision))]

pub mod bessel;
pub mod dd;
pub mod error;
pub mod gbm_density;
pub mod hw_core;
pub mod hw_reference;
pub mod quad;
pub mod saddle;

mod elementary;
mod roots;

pub use error::{HwError, Result};
