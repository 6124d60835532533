//! `q(w₀ + δ) = ρ (s₀ - s)` evaluated from the displacement `δ` alone.
//!
//! Stencil values of `q` are tiny next to the energies that make them up.
//! Forming `w₀ + δ` first and inverting the equation of state afterwards
//! loses the increment to round-off, most visibly for the Tait model where
//! the cold compression energy dwarfs the thermal one. Here every change
//! (`ΔR`, `Δe`, `Δv`, the cold energy, the temperature) is built directly
//! from `δ`, so the relative accuracy of `q` follows the displacement.

use irp_core::{EosModel, TaitParams};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IncrementError {
    #[error("base state {0:?} is not admissible")]
    Base([f64; 3]),
    #[error("displacement {0:?} leaves the admissible set")]
    Outside([f64; 3]),
}

#[derive(Debug, Clone, Copy)]
enum Model {
    Polytropic {
        gamma0: f64,
    },
    Tait {
        p: TaitParams,
        a: f64,
        b: f64,
        theta0: f64,
    },
}

/// Specific entropy change along displacements from a fixed base state.
#[derive(Debug, Clone, Copy)]
pub struct QIncrement {
    rho: f64,
    m: f64,
    r: f64,
    e: f64,
    v: f64,
    model: Model,
}

fn internal_energy_density(w: [f64; 3]) -> f64 {
    crate::oracle::fd_hessian::internal_energy_density(w)
}

/// `x ↦ ((1+x)^k - 1)/k`, continuous at `k = 0`.
fn pow_change(x: f64, k: f64) -> f64 {
    let l = x.ln_1p();
    if k == 0.0 {
        l
    } else {
        (k * l).exp_m1() / k
    }
}

impl QIncrement {
    pub fn new(eos: &EosModel, w: [f64; 3]) -> Result<Self, IncrementError> {
        let [rho, m, _] = w;
        let r = internal_energy_density(w);
        if !(rho > 0.0 && r > 0.0) {
            return Err(IncrementError::Base(w));
        }
        let (e, v) = (r / rho, 1.0 / rho);
        let model = match eos {
            EosModel::Polytropic(p) => Model::Polytropic { gamma0: p.gamma0() },
            EosModel::Tait(t) => {
                let p = *t.params();
                let (a, b) = (t.a(), t.b());
                let cold =
                    a * (v - p.v_r) + b * v_r_phi(&p, v) + p.c * p.theta_r * p.theta_r + p.e_r;
                let theta_sq = p.theta_r * p.theta_r - 2.0 * (cold - e) / p.c;
                if !(theta_sq > 0.0) {
                    return Err(IncrementError::Base(w));
                }
                Model::Tait {
                    p,
                    a,
                    b,
                    theta0: theta_sq.sqrt(),
                }
            }
        };
        Ok(Self {
            rho,
            m,
            r,
            e,
            v,
            model,
        })
    }

    /// `q` at `w₀ + δ`, relative to the entropy of `w₀`.
    pub fn q(&self, d: [f64; 3]) -> Result<f64, IncrementError> {
        let [d_rho, d_m, d_energy] = d;
        let (rho0, m0) = (self.rho, self.m);
        let rho = rho0 + d_rho;
        if !(rho > 0.0) {
            return Err(IncrementError::Outside(d));
        }
        let d_kinetic = (rho0 * d_m * (2.0 * m0 + d_m) - m0 * m0 * d_rho) / (2.0 * rho0 * rho);
        let d_r = d_energy - d_kinetic;
        let d_e = (rho0 * d_r - self.r * d_rho) / (rho0 * rho);
        // v = 1/ρ, so v/v₀ - 1 = -δρ/ρ
        let rel_v = -d_rho / rho;
        let d_v = self.v * rel_v;

        let d_s = match self.model {
            Model::Polytropic { gamma0 } => {
                let rel_e = d_e / self.e;
                if !(rel_e > -1.0) {
                    return Err(IncrementError::Outside(d));
                }
                rel_e.ln_1p() + (gamma0 - 1.0) * rel_v.ln_1p()
            }
            Model::Tait { p, a, b, theta0 } => {
                // Φ(v) - Φ(v₀) with Φ' = -v^-ν
                let d_phi = -self.v.powf(1.0 - p.nu) * pow_change(rel_v, 1.0 - p.nu);
                let d_c0 = a * d_v + b * d_phi - d_e;
                let theta_sq = theta0 * theta0 - 2.0 * d_c0 / p.c;
                if !(theta_sq > 0.0) {
                    return Err(IncrementError::Outside(d));
                }
                let d_theta = -2.0 * d_c0 / p.c / (theta_sq.sqrt() + theta0);
                p.c * d_theta + p.d * d_v
            }
        };
        Ok(-rho * d_s)
    }
}

/// `Φ(v) = ∫_v^{v_r} t^-ν dt`.
fn v_r_phi(p: &TaitParams, v: f64) -> f64 {
    if p.nu == 1.0 {
        (p.v_r / v).ln()
    } else {
        (p.v_r.powf(1.0 - p.nu) - v.powf(1.0 - p.nu)) / (1.0 - p.nu)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use irp_core::{ConservedState, Eos, Polytropic, Tait};

    fn direct(eos: &EosModel, w0: [f64; 3], d: [f64; 3]) -> f64 {
        let s = |w: [f64; 3]| {
            let r = internal_energy_density(w);
            eos.entropy_from_ev(r / w[0], 1.0 / w[0]).unwrap()
        };
        let w = [w0[0] + d[0], w0[1] + d[1], w0[2] + d[2]];
        w[0] * (s(w0) - s(w))
    }

    #[test]
    fn matches_direct_evaluation_for_finite_steps() {
        let models: [EosModel; 3] = [
            Polytropic::new(1.4, 1.0).unwrap().into(),
            Tait::new(TaitParams::illustrative(1.0)).unwrap().into(),
            Tait::new(TaitParams::illustrative(2.0)).unwrap().into(),
        ];
        let w0 = [1.1, 0.4, 3.5];
        let d = [0.05, -0.03, 0.1];
        for eos in &models {
            let inc = QIncrement::new(eos, w0).unwrap();
            let (a, b) = (inc.q(d).unwrap(), direct(eos, w0, d));
            assert!((a - b).abs() <= 1e-12 * b.abs(), "{a} vs {b}");
            assert_eq!(inc.q([0.0; 3]).unwrap(), 0.0);
        }
    }

    #[test]
    fn base_entropy_matches_the_model() {
        let eos: EosModel = Tait::new(TaitParams::illustrative(2.0)).unwrap().into();
        let w = ConservedState::new(1.2, [0.3], 4.5);
        let inc = QIncrement::new(&eos, [w.rho, w.m[0], w.energy]).unwrap();
        let Model::Tait { theta0, .. } = inc.model else {
            unreachable!()
        };
        let s = w.specific_entropy(&eos).unwrap();
        let theta = eos
            .derivatives(irp_core::ThermoState { s, v: 1.0 / w.rho })
            .f_s;
        assert!((theta0 - theta).abs() < 1e-12 * theta);
    }

    #[test]
    fn leaving_the_domain_is_reported() {
        let eos: EosModel = Polytropic::new(1.4, 1.0).unwrap().into();
        let inc = QIncrement::new(&eos, [1.0, 0.0, 1.0]).unwrap();
        assert!(inc.q([0.0, 0.0, -2.0]).is_err());
        assert!(inc.q([-1.5, 0.0, 0.0]).is_err());
    }
}
