//! Conserved variables, the invariant region `Σ = {ρ > 0, R > 0, q < 0}`
//! and the Hessian of the entropy-deficit function `q = ρ (s₀ - s)`.

use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use crate::eos::{EntropyDerivatives, Eos, ThermoState};
use crate::error::{Constraint, Error, Result};

/// `w = (ρ, m, E)` with a `D`-component momentum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConservedState<const D: usize = 1> {
    pub rho: f64,
    pub m: [f64; D],
    pub energy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Primitives<const D: usize = 1> {
    pub u: [f64; D],
    pub v: f64,
    pub e: f64,
}

impl<const D: usize> ConservedState<D> {
    pub const ZERO: Self = Self {
        rho: 0.0,
        m: [0.0; D],
        energy: 0.0,
    };

    pub fn new(rho: f64, m: [f64; D], energy: f64) -> Self {
        Self { rho, m, energy }
    }

    pub fn momentum_norm_sq(&self) -> f64 {
        self.m.iter().map(|x| x * x).sum()
    }

    pub fn momentum_norm(&self) -> f64 {
        self.momentum_norm_sq().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.rho.is_finite() && self.energy.is_finite() && self.m.iter().all(|x| x.is_finite())
    }

    fn require_density(&self) -> Result<()> {
        if self.rho > 0.0 && self.is_finite() {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "density {} is not positive",
                self.rho
            )))
        }
    }

    /// `u = m/ρ`, `v = 1/ρ`, `e = (E - |m|²/(2ρ))/ρ`.
    pub fn primitives(&self) -> Result<Primitives<D>> {
        self.require_density()?;
        let v = 1.0 / self.rho;
        Ok(Primitives {
            u: self.m.map(|mi| mi * v),
            v,
            e: self.internal_energy_unchecked() * v,
        })
    }

    /// Internal energy density `R = E - |m|²/(2ρ) = ρe`.
    pub fn internal_energy(&self) -> Result<f64> {
        self.require_density()?;
        Ok(self.internal_energy_unchecked())
    }

    fn internal_energy_unchecked(&self) -> f64 {
        self.energy - 0.5 * self.momentum_norm_sq() / self.rho
    }

    /// Components as a flat `[ρ, m₁..m_D, E]` iterator.
    pub fn components(&self) -> impl Iterator<Item = f64> + '_ {
        std::iter::once(self.rho)
            .chain(self.m.iter().copied())
            .chain(std::iter::once(self.energy))
    }

    pub fn map(&self, mut f: impl FnMut(f64) -> f64) -> Self {
        Self {
            rho: f(self.rho),
            m: self.m.map(&mut f),
            energy: f(self.energy),
        }
    }

    pub fn zip_with(&self, other: &Self, mut f: impl FnMut(f64, f64) -> f64) -> Self {
        let mut m = [0.0; D];
        for (k, mk) in m.iter_mut().enumerate() {
            *mk = f(self.m[k], other.m[k]);
        }
        Self {
            rho: f(self.rho, other.rho),
            m,
            energy: f(self.energy, other.energy),
        }
    }

    /// Largest componentwise absolute value.
    pub fn max_abs(&self) -> f64 {
        self.components().fold(0.0, |acc, x| acc.max(x.abs()))
    }

    /// `θ self + (1 - θ) anchor`.
    pub fn blend_towards(&self, anchor: &Self, theta: f64) -> Self {
        self.zip_with(anchor, |a, b| theta * a + (1.0 - theta) * b)
    }

    /// Entropy from the state, which must have `ρ > 0` and `R > 0`.
    pub fn specific_entropy<E: Eos + ?Sized>(&self, eos: &E) -> Result<f64> {
        let p = self.primitives()?;
        if !(p.e * self.rho > 0.0) {
            return Err(Error::Domain(format!(
                "internal energy {} is not positive",
                p.e * self.rho
            )));
        }
        eos.entropy_from_ev(p.e, p.v)
    }
}

impl<const D: usize> Add for ConservedState<D> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.zip_with(&rhs, |a, b| a + b)
    }
}

impl<const D: usize> Sub for ConservedState<D> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.zip_with(&rhs, |a, b| a - b)
    }
}

impl<const D: usize> Neg for ConservedState<D> {
    type Output = Self;
    fn neg(self) -> Self {
        self.map(|a| -a)
    }
}

impl<const D: usize> Mul<f64> for ConservedState<D> {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        self.map(|a| a * k)
    }
}

impl<const D: usize> Mul<ConservedState<D>> for f64 {
    type Output = ConservedState<D>;
    fn mul(self, w: ConservedState<D>) -> ConservedState<D> {
        w * self
    }
}

impl<const D: usize> AddAssign for ConservedState<D> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<const D: usize> SubAssign for ConservedState<D> {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

/// Entropy floor and tolerances defining numerical membership in `Σ`.
///
/// A state is a member when
/// `ρ ≥ eps_rho ρ_ref`, `R ≥ eps_r e_ref ρ` and
/// `ρ (s₀ - entropy_slack - s) ≤ -eps_q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantRegion {
    pub s0: f64,
    pub eps_rho: f64,
    pub eps_r: f64,
    pub eps_q: f64,
    /// Absolute allowance below `s0` absorbing round-off in the entropy
    /// evaluation of states that sit exactly on the floor.
    pub entropy_slack: f64,
}

pub const DEFAULT_EPS_RHO: f64 = 1e-13;
pub const DEFAULT_EPS_R: f64 = 1e-13;

impl InvariantRegion {
    pub fn new(s0: f64) -> Self {
        Self {
            s0,
            eps_rho: DEFAULT_EPS_RHO,
            eps_r: DEFAULT_EPS_R,
            eps_q: 0.0,
            entropy_slack: 0.0,
        }
    }

    pub fn with_entropy_slack(mut self, slack: f64) -> Self {
        self.entropy_slack = slack;
        self
    }

    /// Value of the convex constraint function `U_c(w)`; `w` satisfies `c`
    /// iff the value is `≤ 0`.
    ///
    /// The density and internal-energy constraints are total (they return
    /// `+∞` where undefined). The entropy constraint needs `ρ > 0`, `R > 0`
    /// and fails with the inversion error otherwise, except that an energy
    /// below the zero-temperature curve counts as `q = +∞`: that set is
    /// convex, so the extension keeps `q` convex.
    pub fn constraint_value<E: Eos + ?Sized, const D: usize>(
        &self,
        constraint: Constraint,
        w: &ConservedState<D>,
        eos: &E,
    ) -> Result<f64> {
        let scales = eos.reference_scales();
        match constraint {
            Constraint::Density => {
                if w.rho.is_nan() {
                    return Ok(f64::INFINITY);
                }
                Ok(self.eps_rho * scales.density() - w.rho)
            }
            Constraint::InternalEnergy => match w.internal_energy() {
                Ok(r) if r.is_finite() => Ok(self.eps_r * scales.energy * w.rho - r),
                _ => Ok(f64::INFINITY),
            },
            Constraint::Entropy => match w.specific_entropy(eos) {
                Ok(s) => Ok(w.rho * (self.s0 - self.entropy_slack - s) + self.eps_q),
                Err(Error::NoPhysicalRoot { .. }) => Ok(f64::INFINITY),
                Err(e) => Err(e),
            },
        }
    }

    /// `q = ρ (s₀ - s)`.
    pub fn q_value<E: Eos + ?Sized, const D: usize>(
        &self,
        w: &ConservedState<D>,
        eos: &E,
    ) -> Result<f64> {
        let s = w.specific_entropy(eos)?;
        Ok(w.rho * (self.s0 - s))
    }

    /// Checks `ρ`, `R`, `q` in that order; `q` is only evaluated when the
    /// first two hold. Total: never fails.
    pub fn membership<E: Eos + ?Sized, const D: usize>(
        &self,
        w: &ConservedState<D>,
        eos: &E,
    ) -> Membership {
        for c in Constraint::ALL {
            match self.constraint_value(c, w, eos) {
                Ok(u) if u <= 0.0 => {}
                _ => return Membership::Violates(c),
            }
        }
        Membership::Member
    }

    pub fn contains<E: Eos + ?Sized, const D: usize>(
        &self,
        w: &ConservedState<D>,
        eos: &E,
    ) -> bool {
        self.membership(w, eos).is_member()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Member,
    Violates(Constraint),
}

impl Membership {
    pub fn is_member(self) -> bool {
        self == Membership::Member
    }

    pub fn violated(self) -> Option<Constraint> {
        match self {
            Membership::Member => None,
            Membership::Violates(c) => Some(c),
        }
    }
}

/// Leading principal minors of `D²q` in `(ρ, m, E)` with `m = |m|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HessianMinors {
    pub q_rr: f64,
    pub a: f64,
    pub b: f64,
}

impl HessianMinors {
    pub fn all_positive(&self) -> bool {
        self.q_rr > 0.0 && self.a > 0.0 && self.b > 0.0
    }

    pub fn from_matrix(h: &[[f64; 3]; 3]) -> Self {
        let a = h[0][0] * h[1][1] - h[0][1] * h[1][0];
        let b = h[0][0] * (h[1][1] * h[2][2] - h[1][2] * h[2][1])
            - h[0][1] * (h[1][0] * h[2][2] - h[1][2] * h[2][0])
            + h[0][2] * (h[1][0] * h[2][1] - h[1][1] * h[2][0]);
        Self {
            q_rr: h[0][0],
            a,
            b,
        }
    }
}

/// Reduced variables `(v, |m|, E)` and the G-derivatives at the state.
struct ReducedPoint {
    v: f64,
    m: f64,
    energy: f64,
    g: EntropyDerivatives,
    /// `G_ee G_vv - G_ev² = det D²F / θ⁴`, free of the cancellation in the
    /// entries.
    det_g: f64,
}

fn reduced_point<E: Eos + ?Sized, const D: usize>(
    w: &ConservedState<D>,
    eos: &E,
) -> Result<ReducedPoint> {
    let s = w.specific_entropy(eos)?;
    let v = 1.0 / w.rho;
    let ts = ThermoState::new(s, v)?;
    let g = eos.entropy_derivatives(ts)?;
    Ok(ReducedPoint {
        v,
        m: w.momentum_norm(),
        energy: w.energy,
        g,
        det_g: eos.hessian_determinant(ts) * g.g_e.powi(4),
    })
}

/// Analytic Hessian of `q` in `(ρ, |m|, E)`, independent of `s₀`.
pub fn q_hessian<E: Eos + ?Sized, const D: usize>(
    w: &ConservedState<D>,
    eos: &E,
) -> Result<[[f64; 3]; 3]> {
    let ReducedPoint {
        v, m, energy, g, ..
    } = reduced_point(w, eos)?;
    let v2 = v * v;
    let v3 = v2 * v;
    let xi = energy - v * m * m;
    let q_rr = -v3 * (g.g_vv + g.g_ee * xi * xi + 2.0 * xi * g.g_ev - m * m * g.g_e);
    let q_rm = -m * v2 * g.g_e - g.g_ee * v3 * m * xi - m * v3 * g.g_ev;
    let q_re = v2 * xi * g.g_ee + v2 * g.g_ev;
    let q_mm = v * g.g_e - v3 * m * m * g.g_ee;
    let q_me = v2 * m * g.g_ee;
    let q_ee = -v * g.g_ee;
    Ok([[q_rr, q_rm, q_re], [q_rm, q_mm, q_me], [q_re, q_me, q_ee]])
}

pub fn q_hessian_minors<E: Eos + ?Sized, const D: usize>(
    w: &ConservedState<D>,
    eos: &E,
) -> Result<HessianMinors> {
    Ok(HessianMinors::from_matrix(&q_hessian(w, eos)?))
}

/// Regrouped closed forms of the second and third minors,
/// `A = -v⁴ [G_e (E² G_ee + 2E G_ev + G_vv) + v² m² (G_ev² - G_ee G_vv)]`
/// and `B = v⁵ G_e (G_vv G_ee - G_ev²)`.
pub fn q_minors_closed_form<E: Eos + ?Sized, const D: usize>(
    w: &ConservedState<D>,
    eos: &E,
) -> Result<HessianMinors> {
    let ReducedPoint {
        v,
        m,
        energy,
        g,
        det_g,
    } = reduced_point(w, eos)?;
    let h = q_hessian(w, eos)?;
    let v4 = v.powi(4);
    Ok(HessianMinors {
        q_rr: h[0][0],
        a: -v4
            * (g.g_e * (energy * energy * g.g_ee + 2.0 * energy * g.g_ev + g.g_vv)
                - v * v * m * m * det_g),
        b: v4 * v * g.g_e * det_g,
    })
}
