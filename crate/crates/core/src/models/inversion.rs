//! Safeguarded Newton inversions for models without a closed-form inverse.

use crate::eos::{Eos, ThermoState};
use crate::error::{Error, Result};

pub const MAX_ITERATIONS: usize = 100;

/// Relative residual tolerance of the Newton inversions.
pub const RESIDUAL_TOLERANCE: f64 = 1e-12;

enum Probe {
    /// Off the physical branch, or the function is still below the target.
    Below,
    /// Residual and slope on the physical branch.
    Value { residual: f64, slope: f64 },
}

/// Root of a function increasing in `s` on its physical branch.
///
/// Newton steps are taken while they stay inside the current bracket;
/// otherwise the bracket is bisected or, while one side is still open,
/// expanded geometrically.
fn monotone_root(
    mut probe: impl FnMut(f64) -> Probe,
    guess: f64,
    scale: f64,
    tolerance: f64,
    (e, v): (f64, f64),
) -> Result<f64> {
    let mut lo: Option<f64> = None;
    let mut hi: Option<f64> = None;
    // lower bracket set by leaving the physical branch rather than by a residual
    let mut lo_on_edge = false;
    let mut s = guess;
    let mut expand = scale;
    let max_step = 20.0 * scale;

    for _ in 0..MAX_ITERATIONS {
        let newton = match probe(s) {
            Probe::Below => {
                if lo.is_none_or(|l| s >= l) {
                    lo = Some(s);
                    lo_on_edge = true;
                }
                None
            }
            Probe::Value { residual, slope } => {
                if residual.abs() <= tolerance {
                    // one more step: the residual test bounds the error in
                    // s only by tolerance/slope, which is loose at low θ
                    let polished = s - residual / slope;
                    return Ok(if polished.is_finite() { polished } else { s });
                }
                if residual < 0.0 {
                    if lo.is_none_or(|l| s >= l) {
                        lo = Some(s);
                        lo_on_edge = false;
                    }
                } else {
                    hi = Some(hi.map_or(s, |h| h.min(s)));
                }
                let step = -residual / slope;
                step.is_finite()
                    .then(|| s + step.clamp(-max_step, max_step))
            }
        };

        if let (Some(l), Some(h)) = (lo, hi) {
            if h - l <= 4.0 * f64::EPSILON * l.abs().max(h.abs()).max(scale) {
                if lo_on_edge {
                    break;
                }
                return Ok(0.5 * (l + h));
            }
        }

        s = match (newton, lo, hi) {
            (Some(n), Some(l), Some(h)) if n > l && n < h => n,
            (_, Some(l), Some(h)) => 0.5 * (l + h),
            (Some(n), Some(l), None) if n > l => n,
            (Some(n), None, Some(h)) if n < h => n,
            (_, Some(l), None) => {
                expand *= 2.0;
                l + expand
            }
            (_, None, Some(h)) => {
                expand *= 2.0;
                h - expand
            }
            (_, None, None) => unreachable!("every probe updates a bracket side"),
        };
    }
    Err(Error::InversionFailure {
        e,
        v,
        iterations: MAX_ITERATIONS,
    })
}

/// Solves `F(s, v) = e` for `s` by safeguarded Newton iteration.
///
/// Iterates to `|F(s, v) - e| <= 1e-12 max(|e|, e_ref)` and then takes a
/// final Newton step. States with
/// non-positive temperature are treated as lying below the root, so the
/// result is always on the branch where `F_s > 0`.
pub fn generic_entropy_from_ev<E: Eos + ?Sized>(
    eos: &E,
    e: f64,
    v: f64,
    guess: Option<f64>,
) -> Result<f64> {
    if !(v > 0.0) || !e.is_finite() {
        return Err(Error::Domain(format!("cannot invert e = {e}, v = {v}")));
    }
    let scales = eos.reference_scales();
    let tolerance = RESIDUAL_TOLERANCE * e.abs().max(scales.energy);
    monotone_root(
        |s| {
            let d = eos.derivatives(ThermoState { s, v });
            if !(d.f_s > 0.0) {
                Probe::Below
            } else {
                Probe::Value {
                    residual: d.e - e,
                    slope: d.f_s,
                }
            }
        },
        guess.unwrap_or(0.0),
        scales.entropy,
        tolerance,
        (e, v),
    )
}

/// Solves `-F_v(s, v) = p` for `s`, assuming `∂P/∂s = Γθ/v > 0`.
pub fn generic_entropy_from_pv<E: Eos + ?Sized>(
    eos: &E,
    p: f64,
    v: f64,
    guess: Option<f64>,
) -> Result<f64> {
    if !(v > 0.0) || !p.is_finite() {
        return Err(Error::Domain(format!("cannot invert p = {p}, v = {v}")));
    }
    let scales = eos.reference_scales();
    let p_scale = scales.energy / scales.volume;
    let tolerance = RESIDUAL_TOLERANCE * p.abs().max(p_scale);
    monotone_root(
        |s| {
            let d = eos.derivatives(ThermoState { s, v });
            let slope = -d.f_sv;
            if !(d.f_s > 0.0) || !(slope > 0.0) {
                Probe::Below
            } else {
                Probe::Value {
                    residual: -d.f_v - p,
                    slope,
                }
            }
        },
        guess.unwrap_or(0.0),
        scales.entropy,
        tolerance,
        (p, v),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{Polytropic, Tait, TaitParams};

    #[test]
    fn agrees_with_closed_forms() {
        let poly = Polytropic::new(1.4, 1.0).unwrap();
        let tait = Tait::new(TaitParams::illustrative(2.0)).unwrap();
        for &(s, v) in &[(0.0, 1.0), (-2.5, 0.02), (3.0, 40.0)] {
            let e = poly.energy(ThermoState { s, v });
            let n = generic_entropy_from_ev(&poly, e, v, None).unwrap();
            assert!((n - s).abs() <= 1e-11 * s.abs().max(1.0), "{n} vs {s}");
        }
        for &(s, v) in &[(0.0, 1.0), (-0.5, 0.9), (1.5, 1.2)] {
            let e = tait.energy(ThermoState { s, v });
            let n = generic_entropy_from_ev(&tait, e, v, None).unwrap();
            let c = tait.entropy_from_ev(e, v).unwrap();
            assert!((n - c).abs() <= 1e-11 * c.abs().max(1.0));
        }
    }

    #[test]
    fn exact_guess_returns_immediately() {
        let poly = Polytropic::new(1.4, 1.0).unwrap();
        let (s, v) = (0.7, 2.0);
        let e = poly.energy(ThermoState { s, v });
        assert_eq!(generic_entropy_from_ev(&poly, e, v, Some(s)).unwrap(), s);
    }

    #[test]
    fn pressure_inversion() {
        let tait = Tait::new(TaitParams::illustrative(1.0)).unwrap();
        let n = generic_entropy_from_pv(&tait, 4.0, 0.9, None).unwrap();
        let c = tait.entropy_from_pv(4.0, 0.9).unwrap();
        assert!((n - c).abs() < 1e-11);
    }

    #[test]
    fn unreachable_energy_fails() {
        let tait = Tait::new(TaitParams::illustrative(2.0)).unwrap();
        assert!(matches!(
            generic_entropy_from_ev(&tait, -100.0, 1.0, None),
            Err(Error::InversionFailure { .. })
        ));
    }
}
