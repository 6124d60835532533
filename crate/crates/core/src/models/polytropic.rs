use crate::eos::{EnergyDerivatives, Eos, ReferenceScales, ThermoState};
use crate::error::{Error, Result};

/// Polytropic ideal gas, `F(s, v) = k e^s v^(1 - γ₀)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Polytropic {
    gamma0: f64,
    k: f64,
}

impl Polytropic {
    pub fn new(gamma0: f64, k: f64) -> Result<Self> {
        if !(gamma0 > 1.0) || !gamma0.is_finite() {
            return Err(Error::InvalidParameter {
                name: "gamma0",
                reason: format!("must be > 1, got {gamma0}"),
            });
        }
        if !(k > 0.0) || !k.is_finite() {
            return Err(Error::InvalidParameter {
                name: "k",
                reason: format!("must be > 0, got {k}"),
            });
        }
        Ok(Self { gamma0, k })
    }

    pub fn gamma0(&self) -> f64 {
        self.gamma0
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// `c = k (γ₀ - 1)` in `s = ln(P / (c ρ^γ₀))`.
    pub fn c(&self) -> f64 {
        self.k * (self.gamma0 - 1.0)
    }
}

impl Eos for Polytropic {
    fn derivatives(&self, ts: ThermoState) -> EnergyDerivatives {
        let ThermoState { s, v } = ts;
        let g = self.gamma0;
        let f = self.k * s.exp() * v.powf(1.0 - g);
        let f_v = (1.0 - g) * f / v;
        let f_vv = g * (g - 1.0) * f / (v * v);
        EnergyDerivatives {
            e: f,
            f_s: f,
            f_v,
            f_ss: f,
            f_sv: f_v,
            f_vv,
            f_vvv: -(g + 1.0) * f_vv / v,
        }
    }

    fn hessian_determinant(&self, ts: ThermoState) -> f64 {
        let f = self.energy(ts);
        (self.gamma0 - 1.0) * f * f / (ts.v * ts.v)
    }

    fn is_admissible(&self, ts: ThermoState) -> bool {
        ts.v > 0.0 && ts.v.is_finite() && ts.s.is_finite()
    }

    fn reference_scales(&self) -> ReferenceScales {
        ReferenceScales {
            energy: self.k,
            volume: 1.0,
            entropy: 1.0,
            temperature: self.k,
        }
    }

    /// Closed form `s = ln(e v^(γ₀-1) / k)`.
    fn entropy_from_ev(&self, e: f64, v: f64) -> Result<f64> {
        if !(e > 0.0) || !(v > 0.0) || !e.is_finite() || !v.is_finite() {
            return Err(Error::Domain(format!(
                "polytropic entropy needs e > 0 and v > 0, got e = {e}, v = {v}"
            )));
        }
        Ok((e / self.k).ln() + (self.gamma0 - 1.0) * v.ln())
    }

    /// Closed form `s = ln(P / (c ρ^γ₀))`.
    fn entropy_from_pv(&self, p: f64, v: f64) -> Result<f64> {
        if !(p > 0.0) || !(v > 0.0) || !p.is_finite() || !v.is_finite() {
            return Err(Error::Domain(format!(
                "polytropic entropy needs P > 0 and v > 0, got P = {p}, v = {v}"
            )));
        }
        Ok((p / self.c()).ln() + self.gamma0 * v.ln())
    }
}
