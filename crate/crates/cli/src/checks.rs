//! Comparisons between closed forms and the independent oracles.

use irp_core::state::q_minors_closed_form;
use irp_core::{ConservedState, Eos, EosModel, HessianMinors, ThermoState};

use crate::oracle::fd_hessian::{
    fd_hessian_in_basis, leading_minors_from_basis, matrix_scale, min_eigenvalue, stencil_basis,
    to_conserved, FdError,
};
use crate::oracle::q_increment::{IncrementError, QIncrement};

/// Relative finite-difference step for `q`.
pub const FD_STEP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionCheck {
    pub closed: HessianMinors,
    pub fd: [f64; 3],
    /// Largest relative difference over the three minors.
    pub max_rel_diff: f64,
    pub fd_min_eigenvalue: f64,
    pub fd_scale: f64,
    /// Largest change of the difference minors when the step is halved,
    /// relative to the closed forms: an estimate of the difference error.
    pub fd_spread: f64,
    /// `(e/θ) ∂θ/∂e = e F_ss / θ²`: how strongly rounding of the stored
    /// energy moves the temperature, and with it every minor.
    pub conditioning: f64,
}

impl RegionCheck {
    pub fn passes(&self, tolerance: f64) -> bool {
        self.closed.all_positive()
            && self.max_rel_diff <= tolerance
            && self.fd_min_eigenvalue >= -1e-8 * self.fd_scale
    }

    /// Whether the minors are determined well enough to be judged at
    /// `tolerance`. Two cases are not: where `D²F` is nearly singular the
    /// smallest eigenvalue of `D²q` drops below the round-off of the
    /// stencil values, and where the cold energy dwarfs the thermal one the
    /// stored state fixes the temperature only to `ε · conditioning`. Both
    /// error estimates must sit an order of magnitude below `tolerance`.
    pub fn resolved(&self, tolerance: f64) -> bool {
        10.0 * self.fd_spread <= tolerance && 10.0 * f64::EPSILON * self.conditioning <= tolerance
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CheckError {
    #[error(transparent)]
    Core(#[from] irp_core::Error),
    #[error(transparent)]
    Fd(#[from] FdError),
    #[error(transparent)]
    Increment(#[from] IncrementError),
}

/// Closed-form Hessian minors of `q` against a central-difference Hessian.
///
/// The stencil follows the local pressure and thermal energy (see
/// [`stencil_basis`]) and `q` is evaluated from the displacement with
/// [`QIncrement`]. If the stencil does not fit inside the domain the step
/// is reduced.
pub fn check_region_state(
    eos: &EosModel,
    w: &ConservedState<1>,
    h: f64,
) -> Result<RegionCheck, CheckError> {
    let closed = q_minors_closed_form(w, eos)?;
    let point = [w.rho, w.m[0], w.energy];
    let s0 = w.specific_entropy(eos)?;
    let ts = ThermoState {
        s: s0,
        v: 1.0 / w.rho,
    };
    let d = eos.derivatives(ts);
    let thermal = d.f_s * d.f_s / d.f_ss;
    let alpha = (thermal / (ts.v * ts.v * d.f_vv)).sqrt().min(1.0);
    let basis = stencil_basis(point, -d.f_v, w.rho * thermal, alpha);

    let q = QIncrement::new(eos, point)?;
    let mut step = h;
    let hy = loop {
        match fd_hessian_in_basis(|d| q.q(d), &basis, step) {
            Err(FdError::Evaluation { .. }) if step > 1e-3 * h => step *= 0.25,
            other => break other?,
        }
    };
    let fd = leading_minors_from_basis(&hy, &basis);
    let fd_half = leading_minors_from_basis(
        &fd_hessian_in_basis(|d| q.q(d), &basis, 0.5 * step)?,
        &basis,
    );
    let hess = to_conserved(&hy, &basis).ok_or(FdError::Domain(point))?;
    let closed_minors = [closed.q_rr, closed.a, closed.b];
    let rel_max = |other: [f64; 3]| {
        closed_minors
            .iter()
            .zip(other)
            .map(|(c, f)| (c - f).abs() / c.abs())
            .fold(0.0, f64::max)
    };
    let max_rel_diff = rel_max(fd);
    let fd_spread = closed_minors
        .iter()
        .zip(fd.iter().zip(fd_half))
        .map(|(c, (a, b))| (a - b).abs() / c.abs())
        .fold(0.0, f64::max);
    Ok(RegionCheck {
        closed,
        fd,
        max_rel_diff,
        fd_min_eigenvalue: min_eigenvalue(&hess),
        fd_scale: matrix_scale(&hess),
        fd_spread,
        conditioning: (d.e * d.f_ss / (d.f_s * d.f_s)).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use irp_core::Polytropic;

    #[test]
    fn polytropic_reference_state() {
        let eos: EosModel = Polytropic::new(1.4, 1.0).unwrap().into();
        let w = ConservedState::new(1.0, [1.0], 2.0);
        let c = check_region_state(&eos, &w, FD_STEP).unwrap();
        assert!(c.passes(1e-6), "{c:?}");
        assert!(c.resolved(1e-6), "{c:?}");
    }

    #[test]
    fn nearly_singular_tait_state_is_unresolved() {
        // at v ≈ 100 the compression term of D²F is ~1e-15 of the thermal one
        let eos: EosModel = irp_core::Tait::new(irp_core::TaitParams {
            nu: 7.15,
            ..irp_core::TaitParams::illustrative(1.0)
        })
        .unwrap()
        .into();
        let w = ConservedState::new(
            0.0101,
            [0.0101 * 4.37],
            0.0101 * (1120.0 + 0.5 * 4.37 * 4.37),
        );
        let c = check_region_state(&eos, &w, FD_STEP).unwrap();
        assert!(c.closed.all_positive());
        assert!(!c.resolved(1e-5), "{c:?}");
    }

    #[test]
    fn cold_dominated_tait_state_is_unresolved() {
        // θ ≈ 0.1 under a cold energy of 4e11
        let eos: EosModel = irp_core::Tait::new(irp_core::TaitParams {
            nu: 7.15,
            ..irp_core::TaitParams::illustrative(1.0)
        })
        .unwrap()
        .into();
        let (rho, u, e) = (70.64252141619359, -2.5017700486975514, 3.827207109383547e11);
        let w = ConservedState::new(rho, [rho * u], rho * (e + 0.5 * u * u));
        let c = check_region_state(&eos, &w, FD_STEP).unwrap();
        assert!(c.conditioning > 1e13, "{c:?}");
        assert!(!c.resolved(1e-5));
    }
}
