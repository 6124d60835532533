//! Equation-of-state contract in energy form `e = F(s, v)` and the
//! EOS-generic quantities derived from it.
//!
//! Every model supplies `F` together with its partial derivatives up to
//! second order in `s` and third order in `v`. Pressure, temperature, sound
//! speed, the dimensionless quantities (adiabatic exponent, Grüneisen
//! coefficient, dimensionless specific heat, fundamental derivative) and the
//! derivatives of the entropy form `s = G(e, v)` are all computed from those
//! partials here, so models never implement them twice.

use crate::error::{Error, Result};
use crate::models::inversion;

/// A point `(s, v)` in the thermodynamic phase plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoState {
    /// Specific entropy.
    pub s: f64,
    /// Specific volume, always positive.
    pub v: f64,
}

impl ThermoState {
    pub fn new(s: f64, v: f64) -> Result<Self> {
        if !(v > 0.0) || !v.is_finite() || !s.is_finite() {
            return Err(Error::Domain(format!(
                "(s, v) = ({s}, {v}) needs finite s and v > 0"
            )));
        }
        Ok(Self { s, v })
    }
}

/// `F` and its partial derivatives at one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyDerivatives {
    pub e: f64,
    pub f_s: f64,
    pub f_v: f64,
    pub f_ss: f64,
    pub f_sv: f64,
    pub f_vv: f64,
    pub f_vvv: f64,
}

/// First and second derivatives of the entropy form `s = G(e, v)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyDerivatives {
    pub g_e: f64,
    pub g_v: f64,
    pub g_ee: f64,
    pub g_ev: f64,
    pub g_vv: f64,
}

impl EnergyDerivatives {
    /// Change of variables from `F(s, v)` to `G(e, v)` by the implicit
    /// function rule, using `ds = de/θ + (P/θ) dv`.
    pub fn to_entropy_form(&self) -> EntropyDerivatives {
        let fs = self.f_s;
        let fs2 = fs * fs;
        let fs3 = fs2 * fs;
        EntropyDerivatives {
            g_e: 1.0 / fs,
            g_v: -self.f_v / fs,
            g_ee: -self.f_ss / fs3,
            g_ev: (self.f_ss * self.f_v - self.f_sv * fs) / fs3,
            g_vv: (2.0 * self.f_sv * self.f_v * fs
                - self.f_vv * fs2
                - self.f_ss * self.f_v * self.f_v)
                / fs3,
        }
    }
}

/// Positive magnitudes used to turn relative tolerances into absolute ones.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceScales {
    pub energy: f64,
    pub volume: f64,
    pub entropy: f64,
    pub temperature: f64,
}

impl ReferenceScales {
    pub fn density(&self) -> f64 {
        1.0 / self.volume
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionlessQuantities {
    /// Adiabatic exponent `(v/P) F_vv`.
    pub gamma: f64,
    /// Grüneisen coefficient `-(v/θ) F_sv`.
    pub grueneisen: f64,
    /// Dimensionless specific heat `(P v/θ²) F_ss`.
    pub g: f64,
    /// Fundamental derivative `-(v/2) F_vvv / F_vv`.
    pub fundamental_derivative: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityReport {
    pub gamma: f64,
    pub grueneisen: f64,
    pub g: f64,
    pub fundamental_derivative: f64,
    pub convexity_ok: bool,
    pub hyperbolic_ok: bool,
    pub genuinely_nonlinear_ok: bool,
    pub pve_bound_ok: bool,
    pub temperature_positive: bool,
}

impl StabilityReport {
    pub fn all_ok(&self) -> bool {
        self.convexity_ok
            && self.hyperbolic_ok
            && self.genuinely_nonlinear_ok
            && self.pve_bound_ok
            && self.temperature_positive
    }
}

/// Fundamental equation `e = F(s, v)` of a material.
///
/// Implementations must be immutable after construction. The provided
/// methods derive everything else from [`Eos::derivatives`].
pub trait Eos: Send + Sync {
    /// `F` and all partials at `ts`. No admissibility check is made.
    fn derivatives(&self, ts: ThermoState) -> EnergyDerivatives;

    fn is_admissible(&self, ts: ThermoState) -> bool;

    fn reference_scales(&self) -> ReferenceScales;

    fn energy(&self, ts: ThermoState) -> f64 {
        self.derivatives(ts).e
    }

    /// `det D²F = F_ss F_vv - F_sv²`. Models override this where the
    /// difference cancels badly.
    fn hessian_determinant(&self, ts: ThermoState) -> f64 {
        let d = self.derivatives(ts);
        d.f_ss * d.f_vv - d.f_sv * d.f_sv
    }

    /// Inverts `e = F(s, v)` for `s`. Defaults to the safeguarded Newton solve.
    fn entropy_from_ev(&self, e: f64, v: f64) -> Result<f64> {
        inversion::generic_entropy_from_ev(self, e, v, None)
    }

    /// Inverts `P = -F_v(s, v)` for `s`, assuming `P` increases with `s`.
    fn entropy_from_pv(&self, p: f64, v: f64) -> Result<f64> {
        inversion::generic_entropy_from_pv(self, p, v, None)
    }

    fn check_domain(&self, ts: ThermoState) -> Result<()> {
        if self.is_admissible(ts) {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "(s, v) = ({}, {}) is not admissible",
                ts.s, ts.v
            )))
        }
    }

    fn pressure(&self, ts: ThermoState) -> Result<f64> {
        self.check_domain(ts)?;
        let p = -self.derivatives(ts).f_v;
        if !(p > 0.0) {
            return Err(Error::NonphysicalState(format!(
                "pressure {p:e} at (s, v) = ({}, {})",
                ts.s, ts.v
            )));
        }
        Ok(p)
    }

    fn temperature(&self, ts: ThermoState) -> Result<f64> {
        self.check_domain(ts)?;
        Ok(self.derivatives(ts).f_s)
    }

    /// Closure `P(e, v) = G_v / G_e` used by the flux.
    fn pressure_from_ev(&self, e: f64, v: f64) -> Result<f64> {
        let s = self.entropy_from_ev(e, v)?;
        self.pressure(ThermoState::new(s, v)?)
    }

    fn sound_speed(&self, ts: ThermoState) -> Result<f64> {
        self.check_domain(ts)?;
        let d = self.derivatives(ts);
        if !(d.f_vv > 0.0) {
            return Err(Error::NonhyperbolicState { f_vv: d.f_vv });
        }
        Ok(ts.v * d.f_vv.sqrt())
    }

    fn entropy_derivatives(&self, ts: ThermoState) -> Result<EntropyDerivatives> {
        self.check_domain(ts)?;
        Ok(self.derivatives(ts).to_entropy_form())
    }

    fn dimensionless_quantities(&self, ts: ThermoState) -> Result<DimensionlessQuantities> {
        self.check_domain(ts)?;
        let d = self.derivatives(ts);
        let p = -d.f_v;
        let theta = d.f_s;
        if p == 0.0 {
            return Err(Error::DivisionByZero("P"));
        }
        if theta == 0.0 {
            return Err(Error::DivisionByZero("temperature"));
        }
        if d.f_vv == 0.0 {
            return Err(Error::DivisionByZero("F_vv"));
        }
        Ok(dimensionless_from(&d, ts.v))
    }

    /// Reports every stability condition instead of failing on the first.
    fn check_thermo_stability(&self, ts: ThermoState) -> Result<StabilityReport> {
        self.check_domain(ts)?;
        let d = self.derivatives(ts);
        let q = dimensionless_from(&d, ts.v);
        let p = -d.f_v;
        Ok(StabilityReport {
            gamma: q.gamma,
            grueneisen: q.grueneisen,
            g: q.g,
            fundamental_derivative: q.fundamental_derivative,
            // gγ - Γ² = (v/θ)² det D²F
            convexity_ok: q.g >= 0.0 && q.gamma >= 0.0 && self.hessian_determinant(ts) >= 0.0,
            hyperbolic_ok: q.gamma > 0.0,
            genuinely_nonlinear_ok: q.fundamental_derivative > 0.0,
            pve_bound_ok: p * ts.v / d.e < 2.0 * q.gamma,
            temperature_positive: d.f_s > 0.0,
        })
    }
}

fn dimensionless_from(d: &EnergyDerivatives, v: f64) -> DimensionlessQuantities {
    let p = -d.f_v;
    let theta = d.f_s;
    DimensionlessQuantities {
        gamma: v / p * d.f_vv,
        grueneisen: -v / theta * d.f_sv,
        g: p * v / (theta * theta) * d.f_ss,
        fundamental_derivative: -0.5 * v * d.f_vvv / d.f_vv,
    }
}

impl<T: Eos + ?Sized> Eos for &T {
    fn derivatives(&self, ts: ThermoState) -> EnergyDerivatives {
        (**self).derivatives(ts)
    }
    fn is_admissible(&self, ts: ThermoState) -> bool {
        (**self).is_admissible(ts)
    }
    fn reference_scales(&self) -> ReferenceScales {
        (**self).reference_scales()
    }
    fn energy(&self, ts: ThermoState) -> f64 {
        (**self).energy(ts)
    }
    fn hessian_determinant(&self, ts: ThermoState) -> f64 {
        (**self).hessian_determinant(ts)
    }
    fn entropy_from_ev(&self, e: f64, v: f64) -> Result<f64> {
        (**self).entropy_from_ev(e, v)
    }
    fn entropy_from_pv(&self, p: f64, v: f64) -> Result<f64> {
        (**self).entropy_from_pv(p, v)
    }
}
