//! Invariant-region-preserving limiter.
//!
//! A cell reconstruction `w_h` is pulled towards its average,
//! `w̃_h = θ w_h + (1 - θ) w̄`, with the largest `θ ∈ (0, 1]` for which every
//! test value satisfies all three convex constraints `U_i(w) ≤ 0`. For one
//! constraint `θ_i = U(w̄) / (U(w̄) - U_max)`; convexity of `U` guarantees
//! `U(w̃_h) ≤ θ U_max + (1 - θ) U(w̄) = 0` at every test point.

use crate::eos::Eos;
use crate::error::{Constraint, Error, Result};
use crate::state::{ConservedState, InvariantRegion};

/// Linear reconstruction over one cell.
///
/// `slope` is the increment across the cell, so the left and right
/// interface values are `average ∓ slope/2`. The test set is
/// (left interface, midpoint, right interface).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellPolynomial<const D: usize = 1> {
    pub average: ConservedState<D>,
    pub slope: ConservedState<D>,
    pub test_values: [ConservedState<D>; 3],
}

impl<const D: usize> CellPolynomial<D> {
    pub fn linear(average: ConservedState<D>, slope: ConservedState<D>) -> Self {
        let half = slope * 0.5;
        Self {
            average,
            slope,
            test_values: [average - half, average, average + half],
        }
    }

    pub fn constant(average: ConservedState<D>) -> Self {
        Self::linear(average, ConservedState::ZERO)
    }

    pub fn left(&self) -> ConservedState<D> {
        self.test_values[0]
    }

    pub fn right(&self) -> ConservedState<D> {
        self.test_values[2]
    }

    /// Evaluates the reconstruction at `xi ∈ [-1/2, 1/2]` (cell-local coordinate).
    pub fn evaluate(&self, xi: f64) -> ConservedState<D> {
        self.average + self.slope * xi
    }

    /// `θ w_h + (1 - θ) w̄`: slope and test values shrink, average is kept.
    pub fn scaled(&self, theta: f64) -> Self {
        Self {
            average: self.average,
            slope: self.slope * theta,
            test_values: self
                .test_values
                .map(|w| w.blend_towards(&self.average, theta)),
        }
    }

    /// `max |w_h - w̄|` over test points and components.
    pub fn oscillation(&self) -> f64 {
        self.test_values
            .iter()
            .map(|w| (*w - self.average).max_abs())
            .fold(0.0, f64::max)
    }
}

/// One convex constraint `U_i` of the invariant region.
#[derive(Debug, Clone, Copy)]
pub struct ConstraintFn<'a, E: ?Sized> {
    pub constraint: Constraint,
    region: &'a InvariantRegion,
    eos: &'a E,
}

impl<E: Eos + ?Sized> ConstraintFn<'_, E> {
    pub fn eval<const D: usize>(&self, w: &ConservedState<D>) -> Result<f64> {
        self.region.constraint_value(self.constraint, w, self.eos)
    }
}

/// `U₁ = -ρ`, `U₂ = -R`, `U₃ = q`, each shifted by the region's tolerances.
pub fn constraint_functions<'a, E: Eos + ?Sized>(
    region: &'a InvariantRegion,
    eos: &'a E,
) -> [ConstraintFn<'a, E>; 3] {
    Constraint::ALL.map(|constraint| ConstraintFn {
        constraint,
        region,
        eos,
    })
}

/// Scaling factor for a single constraint.
///
/// Returns 1 when no test value violates `U`, and
/// `U(w̄) / (U(w̄) - U_max)` otherwise. An average exactly on the boundary
/// yields 0, meaning the reconstruction must collapse to the average.
pub fn theta_for_constraint<E: Eos + ?Sized, const D: usize>(
    u: &ConstraintFn<'_, E>,
    average: &ConservedState<D>,
    test_values: &[ConservedState<D>],
) -> Result<f64> {
    let u_avg = u.eval(average).map_err(|_| Error::AverageOutsideRegion {
        constraint: u.constraint,
        value: f64::NAN,
    })?;
    let mut u_max = f64::NEG_INFINITY;
    for w in test_values {
        u_max = u_max.max(u.eval(w)?);
    }
    if u_max <= 0.0 {
        return Ok(1.0);
    }
    if !(u_avg <= 0.0) {
        return Err(Error::AverageOutsideRegion {
            constraint: u.constraint,
            value: u_avg,
        });
    }
    if u_avg == 0.0 {
        return Ok(0.0);
    }
    Ok((u_avg / (u_avg - u_max)).clamp(0.0, 1.0))
}

/// `θ = min(1, θ₁, ..., θ_M)` over constraints that are defined at every test value.
pub fn combined_theta<E: Eos + ?Sized, const D: usize>(
    constraints: &[ConstraintFn<'_, E>],
    average: &ConservedState<D>,
    test_values: &[ConservedState<D>],
) -> Result<f64> {
    constraints.iter().try_fold(1.0f64, |theta, u| {
        Ok(theta.min(theta_for_constraint(u, average, test_values)?))
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimiterOutcome<const D: usize = 1> {
    pub theta: f64,
    /// `(θ_ρ, θ_R, θ_q)`, each relative to the original reconstruction.
    pub per_constraint_thetas: [f64; 3],
    pub limited: CellPolynomial<D>,
    pub activated: bool,
}

/// Relative shrink factors tried when round-off leaves a limited test value
/// marginally outside the region.
const ROUNDOFF_BACKOFF: [f64; 6] = [1e-14, 1e-12, 1e-10, 1e-8, 1e-6, 1e-4];

/// Limits `poly` so that all its test values lie in the region.
///
/// `q` is only defined where `ρ > 0` and `R > 0`, so the density and
/// internal-energy factors are applied first and the entropy factor is
/// computed on the pre-scaled reconstruction; the reported `θ_q` is the
/// product of the two, which keeps `θ = min(1, θ_ρ, θ_R, θ_q)`.
pub fn apply_irp_limiter<E: Eos + ?Sized, const D: usize>(
    poly: &CellPolynomial<D>,
    eos: &E,
    region: &InvariantRegion,
) -> Result<LimiterOutcome<D>> {
    let [u_rho, u_r, u_q] = constraint_functions(region, eos);
    let theta_rho = theta_for_constraint(&u_rho, &poly.average, &poly.test_values)?;
    let theta_r = theta_for_constraint(&u_r, &poly.average, &poly.test_values)?;
    let pre_theta = theta_rho.min(theta_r);
    let pre = if pre_theta < 1.0 {
        poly.scaled(pre_theta)
    } else {
        *poly
    };
    let theta_q = pre_theta * theta_for_constraint(&u_q, &pre.average, &pre.test_values)?;

    let mut thetas = [theta_rho, theta_r, theta_q];
    let mut theta = thetas.iter().copied().fold(1.0, f64::min);
    let mut limited = poly.scaled(theta);

    if let Some(c) = first_violation(&limited, eos, region) {
        let base = theta;
        theta = 0.0;
        for eps in ROUNDOFF_BACKOFF {
            let candidate = poly.scaled(base * (1.0 - eps));
            if first_violation(&candidate, eos, region).is_none() {
                theta = base * (1.0 - eps);
                break;
            }
        }
        limited = poly.scaled(theta);
        let i = Constraint::ALL.iter().position(|x| *x == c).unwrap_or(2);
        thetas[i] = theta;
    }

    Ok(LimiterOutcome {
        theta,
        per_constraint_thetas: thetas,
        limited,
        activated: theta < 1.0,
    })
}

fn first_violation<E: Eos + ?Sized, const D: usize>(
    poly: &CellPolynomial<D>,
    eos: &E,
    region: &InvariantRegion,
) -> Option<Constraint> {
    poly.test_values
        .iter()
        .find_map(|w| region.membership(w, eos).violated())
}

/// `max |w̃_h - w_h|` over test points and components.
///
/// For a limited reconstruction this equals `(1 - θ) max |w_h - w̄|`.
pub fn limiter_distortion<const D: usize>(
    original: &CellPolynomial<D>,
    limited: &CellPolynomial<D>,
) -> f64 {
    original
        .test_values
        .iter()
        .zip(&limited.test_values)
        .map(|(a, b)| (*b - *a).max_abs())
        .fold(0.0, f64::max)
}
