//! Admissible thermodynamic and conserved states for property sweeps.

use irp_core::{ConservedState, Eos, EosModel, ThermoState};
use rand::Rng;

/// `i`-th element of the van der Corput sequence in `base`.
pub fn halton(mut i: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

fn log_lerp(lo: f64, hi: f64, t: f64) -> f64 {
    (lo.ln() + t * (hi.ln() - lo.ln())).exp()
}

/// Quasi-random admissible `(s, v)` states covering a working box of the model.
///
/// Polytropic: `v ∈ [10⁻², 10²]`, `s ∈ [-5, 5]`. Tait: `v ∈ [v_r/2, 3v_r/2]`,
/// `θ ∈ [0.05, 4] θ_r`, keeping points with `P > 0`.
pub fn eos_samples(eos: &EosModel, n: usize) -> Vec<ThermoState> {
    let mut out = Vec::with_capacity(n);
    let mut i = 1u64;
    while out.len() < n {
        let (a, b) = (halton(i, 2), halton(i, 3));
        i += 1;
        let ts = match eos {
            EosModel::Polytropic(_) => ThermoState {
                s: -5.0 + 10.0 * a,
                v: log_lerp(1e-2, 1e2, b),
            },
            EosModel::Tait(t) => {
                let p = t.params();
                let v = p.v_r * (0.5 + a);
                let theta = p.theta_r * log_lerp(0.05, 4.0, b);
                ThermoState {
                    s: t.entropy_from_vt(v, theta),
                    v,
                }
            }
        };
        if eos.is_admissible(ts) {
            out.push(ts);
        }
        assert!(
            i < 100 * n as u64 + 1000,
            "sampling box is mostly inadmissible"
        );
    }
    out
}

/// Random conserved state with `ρ ∈ [0.01, 100]` (log-uniform), `|u| ≤ 10`
/// and positive specific internal energy on the admissible domain.
pub fn conserved_sample<R: Rng + ?Sized>(eos: &EosModel, rng: &mut R) -> ConservedState<1> {
    loop {
        let rho = log_lerp(0.01, 100.0, rng.random());
        let u = rng.random_range(-10.0..=10.0);
        let v = 1.0 / rho;
        let e = match eos {
            EosModel::Polytropic(_) => log_lerp(1e-2, 1e2, rng.random()),
            EosModel::Tait(t) => {
                let p = t.params();
                // lowest temperature with P > 0 at this volume
                let floor = ((t.a() - t.b() * v.powf(-p.nu)) / p.d).max(0.0);
                let theta = floor + p.theta_r * log_lerp(0.05, 4.0, rng.random());
                eos.energy(ThermoState {
                    s: t.entropy_from_vt(v, theta),
                    v,
                })
            }
        };
        let w = ConservedState::new(rho, [rho * u], rho * (e + 0.5 * u * u));
        let admissible = eos
            .entropy_from_ev(e, v)
            .is_ok_and(|s| eos.is_admissible(ThermoState { s, v }));
        if e > 0.0 && admissible {
            return w;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use irp_core::{Polytropic, Tait, TaitParams};
    use rand::{rngs::StdRng, SeedableRng};

    #[test]
    fn van_der_corput() {
        assert_eq!(halton(1, 2), 0.5);
        assert_eq!(halton(2, 2), 0.25);
        assert_eq!(halton(3, 2), 0.75);
        assert!((halton(1, 3) - 1.0 / 3.0).abs() < 1e-16);
        assert!((halton(5, 3) - 7.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn samples_are_admissible() {
        let models: [EosModel; 2] = [
            Polytropic::new(1.4, 1.0).unwrap().into(),
            Tait::new(TaitParams::illustrative(1.0)).unwrap().into(),
        ];
        let mut rng = StdRng::seed_from_u64(3);
        for eos in &models {
            for ts in eos_samples(eos, 500) {
                assert!(eos.is_admissible(ts));
            }
            for _ in 0..500 {
                let w = conserved_sample(eos, &mut rng);
                let p = w.primitives().unwrap();
                assert!((0.01..=100.0).contains(&w.rho) && p.u[0].abs() <= 10.0 && p.e > 0.0);
            }
        }
    }
}
