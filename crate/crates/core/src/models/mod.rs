//! Concrete equations of state.

pub mod inversion;
mod polytropic;
mod tait;

pub use inversion::{generic_entropy_from_ev, generic_entropy_from_pv};
pub use polytropic::Polytropic;
pub use tait::{Tait, TaitParams};

use crate::eos::{EnergyDerivatives, Eos, ReferenceScales, ThermoState};
use crate::error::Result;

/// Runtime selection between the shipped models.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EosModel {
    Polytropic(Polytropic),
    Tait(Tait),
}

impl EosModel {
    pub fn name(&self) -> &'static str {
        match self {
            EosModel::Polytropic(_) => "polytropic",
            EosModel::Tait(_) => "tait",
        }
    }
}

impl From<Polytropic> for EosModel {
    fn from(p: Polytropic) -> Self {
        EosModel::Polytropic(p)
    }
}

impl From<Tait> for EosModel {
    fn from(t: Tait) -> Self {
        EosModel::Tait(t)
    }
}

macro_rules! dispatch {
    ($self:ident, $m:ident => $body:expr) => {
        match $self {
            EosModel::Polytropic($m) => $body,
            EosModel::Tait($m) => $body,
        }
    };
}

impl Eos for EosModel {
    fn derivatives(&self, ts: ThermoState) -> EnergyDerivatives {
        dispatch!(self, m => m.derivatives(ts))
    }
    fn is_admissible(&self, ts: ThermoState) -> bool {
        dispatch!(self, m => m.is_admissible(ts))
    }
    fn reference_scales(&self) -> ReferenceScales {
        dispatch!(self, m => m.reference_scales())
    }
    fn hessian_determinant(&self, ts: ThermoState) -> f64 {
        dispatch!(self, m => m.hessian_determinant(ts))
    }
    fn entropy_from_ev(&self, e: f64, v: f64) -> Result<f64> {
        dispatch!(self, m => m.entropy_from_ev(e, v))
    }
    fn entropy_from_pv(&self, p: f64, v: f64) -> Result<f64> {
        dispatch!(self, m => m.entropy_from_pv(p, v))
    }
}
