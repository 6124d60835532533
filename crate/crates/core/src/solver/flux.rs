use crate::eos::{Eos, ThermoState};
use crate::error::{Error, Result};
use crate::state::ConservedState;

/// Thermodynamic closure of one 1D state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedState {
    pub u: f64,
    pub v: f64,
    pub e: f64,
    pub s: f64,
    pub p: f64,
    pub sound_speed: f64,
}

impl ClosedState {
    pub fn wave_speed(&self) -> f64 {
        self.u.abs() + self.sound_speed
    }
}

/// Closes `w` with the EOS: entropy from `(e, v)`, then `P = -F_v` and
/// `a = v sqrt(F_vv)`.
pub fn close_state<E: Eos + ?Sized>(w: &ConservedState<1>, eos: &E) -> Result<ClosedState> {
    let prim = w.primitives()?;
    if !(prim.e * w.rho > 0.0) {
        return Err(Error::NonphysicalState(format!(
            "internal energy {} at rho = {}",
            prim.e * w.rho,
            w.rho
        )));
    }
    let s = eos.entropy_from_ev(prim.e, prim.v)?;
    let ts = ThermoState::new(s, prim.v)?;
    let d = eos.derivatives(ts);
    let p = -d.f_v;
    if !(p > 0.0) || !(d.f_s > 0.0) || !eos.is_admissible(ts) {
        return Err(Error::NonphysicalState(format!(
            "P = {p:e}, θ = {:e} at (s, v) = ({s}, {})",
            d.f_s, prim.v
        )));
    }
    if !(d.f_vv > 0.0) {
        return Err(Error::NonhyperbolicState { f_vv: d.f_vv });
    }
    Ok(ClosedState {
        u: prim.u[0],
        v: prim.v,
        e: prim.e,
        s,
        p,
        sound_speed: prim.v * d.f_vv.sqrt(),
    })
}

/// `(ρu, ρu² + P, (E + P) u)`.
pub fn physical_flux(w: &ConservedState<1>, c: &ClosedState) -> ConservedState<1> {
    ConservedState::new(w.m[0], [w.m[0] * c.u + c.p], (w.energy + c.p) * c.u)
}

/// Local Lax-Friedrichs flux
/// `½ (F(w_L) + F(w_R)) - ½ α (w_R - w_L)`, `α = max(|u| + a)`.
pub fn numerical_flux<E: Eos + ?Sized>(
    wl: &ConservedState<1>,
    wr: &ConservedState<1>,
    eos: &E,
) -> Result<ConservedState<1>> {
    let cl = close_state(wl, eos)?;
    let cr = close_state(wr, eos)?;
    let alpha = cl.wave_speed().max(cr.wave_speed());
    let fl = physical_flux(wl, &cl);
    let fr = physical_flux(wr, &cr);
    Ok((fl + fr) * 0.5 - (*wr - *wl) * (0.5 * alpha))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::Polytropic;

    fn from_prim(rho: f64, u: f64, p: f64) -> ConservedState<1> {
        ConservedState::new(rho, [rho * u], p / 0.4 + 0.5 * rho * u * u)
    }

    #[test]
    fn consistent_with_physical_flux() {
        let eos = Polytropic::new(1.4, 1.0).unwrap();
        let w = from_prim(0.7, -1.3, 2.2);
        let f = numerical_flux(&w, &w, &eos).unwrap();
        let c = close_state(&w, &eos).unwrap();
        assert_eq!(f, physical_flux(&w, &c));
        assert!((c.p - 2.2).abs() < 1e-14);
        assert!((c.sound_speed - (1.4f64 * 2.2 / 0.7).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn mirror_states_carry_no_mass() {
        let eos = Polytropic::new(1.4, 1.0).unwrap();
        let wl = from_prim(1.0, 0.8, 1.0);
        let wr = from_prim(1.0, -0.8, 1.0);
        let f = numerical_flux(&wl, &wr, &eos).unwrap();
        assert_eq!(f.rho, 0.0);
        assert_eq!(f.energy, 0.0);
    }

    #[test]
    fn negative_internal_energy_is_rejected() {
        let eos = Polytropic::new(1.4, 1.0).unwrap();
        let bad = ConservedState::new(1.0, [2.0], 1.0);
        assert!(matches!(
            close_state(&bad, &eos),
            Err(Error::NonphysicalState(_))
        ));
    }
}
