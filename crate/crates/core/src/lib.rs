//! Compressible Euler equations closed by a general equation of state,
//! with the convex invariant region `Σ = {ρ > 0, R > 0, q < 0}` and an
//! invariant-region-preserving limiter for piecewise-linear reconstructions.
//!
//! - [`eos`]: the `e = F(s, v)` contract and derived thermodynamics.
//! - [`models`]: polytropic gas and nonlinear Tait liquid.
//! - [`state`]: conserved variables, region membership, Hessian of `q`.
//! - [`limiter`]: the scaling limiter towards cell averages.
//! - [`solver`]: 1D finite-volume host scheme.

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod eos;
pub mod error;
pub mod limiter;
pub mod models;
pub mod solver;
pub mod state;

pub use eos::{
    DimensionlessQuantities, EnergyDerivatives, EntropyDerivatives, Eos, ReferenceScales,
    StabilityReport, ThermoState,
};
pub use error::{Constraint, Error, Result};
pub use limiter::{apply_irp_limiter, limiter_distortion, CellPolynomial, LimiterOutcome};
pub use models::{EosModel, Polytropic, Tait, TaitParams};
pub use state::{ConservedState, HessianMinors, InvariantRegion, Membership};
