//! Nonlinear Tait equation of state for liquids.
//!
//! With `x = (s - s_r) - D (v - v_r)` the internal energy is
//!
//! ```text
//! F(s, v) = A (v - v_r) + B Φ(v) + x² / (2C) + θ_r (x + C θ_r) + e_r
//! Φ(v)    = ln(v_r / v)                                 ν = 1
//!         = (v_r^(1-ν) - v^(1-ν)) / (1 - ν)             ν > 1
//! ```
//!
//! so that `θ = x/C + θ_r` and `P = D θ - A + B v^(-ν)`. Choosing
//! `A = K_r - p_r + D θ_r` and `B = K_r v_r^ν` gives the thermal form
//! `P = p̄(θ) + K_r [(v_r/v)^ν - 1]` with `p̄(θ) = D (θ - θ_r) + p_r`.

use crate::eos::{EnergyDerivatives, Eos, ReferenceScales, ThermoState};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaitParams {
    /// Modulus of compression at the reference state.
    pub k_r: f64,
    pub v_r: f64,
    pub p_r: f64,
    pub s_r: f64,
    pub e_r: f64,
    pub theta_r: f64,
    /// Exponent ν ≥ 1; exactly 1 selects the logarithmic branch of Φ.
    pub nu: f64,
    /// Heat-capacity constant `C = c_v,r / θ_r`.
    pub c: f64,
    /// Slope of the linearized saturation pressure `p̄'(θ)`.
    pub d: f64,
}

impl TaitParams {
    /// Illustrative water-like set in nondimensional units. Not fitted to
    /// measured data; it only satisfies the structural conditions.
    pub fn illustrative(nu: f64) -> Self {
        Self {
            k_r: 10.0,
            v_r: 1.0,
            p_r: 1.0,
            s_r: 0.0,
            e_r: 2.0,
            theta_r: 1.0,
            nu,
            c: 1.0,
            d: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tait {
    params: TaitParams,
    a: f64,
    b: f64,
}

fn positive(name: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("must be finite and > 0, got {x}"),
        })
    }
}

fn finite(name: &'static str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("must be finite, got {x}"),
        })
    }
}

impl Tait {
    pub fn new(params: TaitParams) -> Result<Self> {
        positive("K_r", params.k_r)?;
        positive("v_r", params.v_r)?;
        positive("theta_r", params.theta_r)?;
        positive("C", params.c)?;
        finite("p_r", params.p_r)?;
        finite("s_r", params.s_r)?;
        finite("e_r", params.e_r)?;
        finite("D", params.d)?;
        if !(params.nu >= 1.0) || !params.nu.is_finite() {
            return Err(Error::InvalidParameter {
                name: "nu",
                reason: format!("must be >= 1, got {}", params.nu),
            });
        }
        Ok(Self {
            a: params.k_r - params.p_r + params.d * params.theta_r,
            b: params.k_r * params.v_r.powf(params.nu),
            params,
        })
    }

    pub fn params(&self) -> &TaitParams {
        &self.params
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    fn is_log_branch(&self) -> bool {
        self.params.nu == 1.0
    }

    fn phi(&self, v: f64) -> f64 {
        let TaitParams { v_r, nu, .. } = self.params;
        if self.is_log_branch() {
            (v_r / v).ln()
        } else {
            (v_r.powf(1.0 - nu) - v.powf(1.0 - nu)) / (1.0 - nu)
        }
    }

    /// `x = (s - s_r) - D (v - v_r)`.
    fn thermal_offset(&self, ts: ThermoState) -> f64 {
        (ts.s - self.params.s_r) - self.params.d * (ts.v - self.params.v_r)
    }

    pub fn temperature_at(&self, ts: ThermoState) -> f64 {
        self.thermal_offset(ts) / self.params.c + self.params.theta_r
    }

    /// Linearized saturation pressure `p̄(θ) = D (θ - θ_r) + p_r`.
    pub fn saturation_pressure(&self, theta: f64) -> f64 {
        self.params.d * (theta - self.params.theta_r) + self.params.p_r
    }

    /// Thermal form `P = p̄(θ) + K_r [(v_r/v)^ν - 1]`.
    pub fn pressure_vt(&self, v: f64, theta: f64) -> f64 {
        let TaitParams { k_r, v_r, nu, .. } = self.params;
        self.saturation_pressure(theta) + k_r * ((v_r / v).powf(nu) - 1.0)
    }

    /// Specific entropy at given `(v, θ)`.
    pub fn entropy_from_vt(&self, v: f64, theta: f64) -> f64 {
        let p = &self.params;
        p.c * (theta - p.theta_r) + p.s_r + p.d * (v - p.v_r)
    }

    /// Isochoric heat capacity `c_v = C θ`.
    pub fn heat_capacity_v(&self, theta: f64) -> f64 {
        self.params.c * theta
    }
}

impl Eos for Tait {
    fn derivatives(&self, ts: ThermoState) -> EnergyDerivatives {
        let TaitParams {
            v_r,
            e_r,
            theta_r,
            nu,
            c,
            d,
            ..
        } = self.params;
        let v = ts.v;
        let x = self.thermal_offset(ts);
        let theta = x / c + theta_r;
        let v_nu = v.powf(-nu);
        // Φ' = -v^-ν, Φ'' = ν v^-(ν+1), Φ''' = -ν (ν+1) v^-(ν+2)
        let phi_1 = -v_nu;
        let phi_2 = nu * v_nu / v;
        let phi_3 = -nu * (nu + 1.0) * v_nu / (v * v);
        EnergyDerivatives {
            e: self.a * (v - v_r)
                + self.b * self.phi(v)
                + x * x / (2.0 * c)
                + theta_r * (x + c * theta_r)
                + e_r,
            f_s: theta,
            f_v: self.a + self.b * phi_1 - d * theta,
            f_ss: 1.0 / c,
            f_sv: -d / c,
            f_vv: self.b * phi_2 + d * d / c,
            f_vvv: self.b * phi_3,
        }
    }

    /// `B Φ''(v) / C`; the `D²/C²` parts of `F_ss F_vv` and `F_sv²` cancel.
    fn hessian_determinant(&self, ts: ThermoState) -> f64 {
        let TaitParams { nu, c, .. } = self.params;
        self.b * nu * ts.v.powf(-nu - 1.0) / c
    }

    /// `v > 0`, `θ > 0` and `P > 0`.
    fn is_admissible(&self, ts: ThermoState) -> bool {
        if !(ts.v > 0.0) || !ts.v.is_finite() || !ts.s.is_finite() {
            return false;
        }
        let d = self.derivatives(ts);
        d.f_s > 0.0 && -d.f_v > 0.0
    }

    fn reference_scales(&self) -> ReferenceScales {
        let p = &self.params;
        ReferenceScales {
            energy: p.c * p.theta_r * p.theta_r + p.e_r.abs() + (p.k_r + p.p_r.abs()) * p.v_r,
            volume: p.v_r,
            entropy: p.c * p.theta_r,
            temperature: p.theta_r,
        }
    }

    /// Solves `x²/(2C) + θ_r x + c₀ = 0` and keeps the root with `θ > 0`.
    ///
    /// The two roots give `θ = ±sqrt(θ_r² - 2c₀/C)`, so at most one is
    /// physical.
    fn entropy_from_ev(&self, e: f64, v: f64) -> Result<f64> {
        if !(v > 0.0) || !v.is_finite() || !e.is_finite() {
            return Err(Error::Domain(format!(
                "Tait entropy needs finite e and v > 0, got e = {e}, v = {v}"
            )));
        }
        let TaitParams {
            v_r,
            s_r,
            e_r,
            theta_r,
            c,
            d,
            ..
        } = self.params;
        let c0 = self.a * (v - v_r) + self.b * self.phi(v) + c * theta_r * theta_r + e_r - e;
        let disc = theta_r * theta_r - 2.0 * c0 / c;
        if !(disc > 0.0) {
            return Err(Error::NoPhysicalRoot { e, v });
        }
        let theta = disc.sqrt();
        // x = C (θ - θ_r), written without cancellation near x = 0.
        let x = -2.0 * c0 / (theta + theta_r);
        Ok(x + s_r + d * (v - v_r))
    }

    fn entropy_from_pv(&self, p: f64, v: f64) -> Result<f64> {
        if !(v > 0.0) || !v.is_finite() || !p.is_finite() {
            return Err(Error::Domain(format!(
                "Tait entropy needs finite P and v > 0, got P = {p}, v = {v}"
            )));
        }
        let TaitParams {
            k_r,
            v_r,
            p_r,
            theta_r,
            nu,
            d,
            ..
        } = self.params;
        if d == 0.0 {
            return Err(Error::Domain(
                "pressure does not determine temperature when D = 0".into(),
            ));
        }
        let theta = theta_r + (p - p_r - k_r * ((v_r / v).powf(nu) - 1.0)) / d;
        if !(theta > 0.0) {
            return Err(Error::Domain(format!(
                "P = {p}, v = {v} implies temperature {theta} <= 0"
            )));
        }
        Ok(self.entropy_from_vt(v, theta))
    }
}
