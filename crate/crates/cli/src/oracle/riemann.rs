//! Exact Riemann solver for a polytropic gas.
//!
//! Star pressure from the standard pressure function
//! `f(p) = f_L(p) + f_R(p) + u_R - u_L`, which is increasing and concave in
//! `p`, by Newton iteration safeguarded with a bisection bracket.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Primitive {
    pub rho: f64,
    pub u: f64,
    pub p: f64,
}

impl Primitive {
    pub fn new(rho: f64, u: f64, p: f64) -> Self {
        Self { rho, u, p }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RiemannError {
    #[error("invalid {side} state: density and pressure must be positive")]
    InvalidState { side: &'static str },
    #[error("invalid gamma0 = {0}")]
    InvalidGamma(f64),
    #[error("vacuum forms: u_R - u_L = {du} >= {critical}")]
    VacuumFormation { du: f64, critical: f64 },
    #[error("star pressure iteration did not converge")]
    NoConvergence,
}

const REL_TOL: f64 = 1e-12;
const MAX_ITER: usize = 200;

/// Pressure and velocity in the star region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarState {
    pub p: f64,
    pub u: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct ExactRiemann {
    left: Primitive,
    right: Primitive,
    gamma: f64,
    a_l: f64,
    a_r: f64,
    star: StarState,
}

fn sound_speed(w: &Primitive, gamma: f64) -> f64 {
    (gamma * w.p / w.rho).sqrt()
}

/// One-sided wave curve `f_K(p)` and its derivative.
fn wave_curve(p: f64, w: &Primitive, a: f64, gamma: f64) -> (f64, f64) {
    if p > w.p {
        let ak = 2.0 / ((gamma + 1.0) * w.rho);
        let bk = (gamma - 1.0) / (gamma + 1.0) * w.p;
        let root = (ak / (p + bk)).sqrt();
        let f = (p - w.p) * root;
        let df = root * (1.0 - 0.5 * (p - w.p) / (p + bk));
        (f, df)
    } else {
        let expo = (gamma - 1.0) / (2.0 * gamma);
        let ratio = p / w.p;
        let f = 2.0 * a / (gamma - 1.0) * (ratio.powf(expo) - 1.0);
        let df = ratio.powf(-(gamma + 1.0) / (2.0 * gamma)) / (w.rho * a);
        (f, df)
    }
}

/// `f(p)` and `f'(p)`.
pub fn pressure_function(p: f64, left: &Primitive, right: &Primitive, gamma: f64) -> (f64, f64) {
    let (fl, dfl) = wave_curve(p, left, sound_speed(left, gamma), gamma);
    let (fr, dfr) = wave_curve(p, right, sound_speed(right, gamma), gamma);
    (fl + fr + right.u - left.u, dfl + dfr)
}

impl ExactRiemann {
    pub fn new(left: Primitive, right: Primitive, gamma: f64) -> Result<Self, RiemannError> {
        if !(gamma > 1.0) || !gamma.is_finite() {
            return Err(RiemannError::InvalidGamma(gamma));
        }
        for (side, w) in [("left", &left), ("right", &right)] {
            if !(w.rho > 0.0 && w.p > 0.0) || !w.u.is_finite() {
                return Err(RiemannError::InvalidState { side });
            }
        }
        let a_l = sound_speed(&left, gamma);
        let a_r = sound_speed(&right, gamma);
        let du = right.u - left.u;
        let critical = 2.0 * (a_l + a_r) / (gamma - 1.0);
        if du >= critical {
            return Err(RiemannError::VacuumFormation { du, critical });
        }
        let p = star_pressure(&left, &right, gamma)?;
        let (fl, _) = wave_curve(p, &left, a_l, gamma);
        let (fr, _) = wave_curve(p, &right, a_r, gamma);
        let u = 0.5 * (left.u + right.u) + 0.5 * (fr - fl);
        Ok(Self {
            left,
            right,
            gamma,
            a_l,
            a_r,
            star: StarState { p, u },
        })
    }

    pub fn star(&self) -> StarState {
        self.star
    }

    /// Self-similar solution at `ξ = x/t`.
    pub fn sample(&self, xi: f64) -> Primitive {
        let g = self.gamma;
        let StarState { p: ps, u: us } = self.star;
        let gm = (g - 1.0) / (g + 1.0);
        if xi <= us {
            let (w, a) = (&self.left, self.a_l);
            if ps > w.p {
                let shock =
                    w.u - a * ((g + 1.0) / (2.0 * g) * ps / w.p + (g - 1.0) / (2.0 * g)).sqrt();
                if xi <= shock {
                    *w
                } else {
                    let r = ps / w.p;
                    Primitive::new(w.rho * (r + gm) / (gm * r + 1.0), us, ps)
                }
            } else {
                let head = w.u - a;
                let a_star = a * (ps / w.p).powf((g - 1.0) / (2.0 * g));
                let tail = us - a_star;
                if xi <= head {
                    *w
                } else if xi >= tail {
                    Primitive::new(w.rho * (ps / w.p).powf(1.0 / g), us, ps)
                } else {
                    let c = 2.0 / (g + 1.0) + gm / a * (w.u - xi);
                    Primitive::new(
                        w.rho * c.powf(2.0 / (g - 1.0)),
                        2.0 / (g + 1.0) * (a + 0.5 * (g - 1.0) * w.u + xi),
                        w.p * c.powf(2.0 * g / (g - 1.0)),
                    )
                }
            }
        } else {
            let (w, a) = (&self.right, self.a_r);
            if ps > w.p {
                let shock =
                    w.u + a * ((g + 1.0) / (2.0 * g) * ps / w.p + (g - 1.0) / (2.0 * g)).sqrt();
                if xi >= shock {
                    *w
                } else {
                    let r = ps / w.p;
                    Primitive::new(w.rho * (r + gm) / (gm * r + 1.0), us, ps)
                }
            } else {
                let head = w.u + a;
                let a_star = a * (ps / w.p).powf((g - 1.0) / (2.0 * g));
                let tail = us + a_star;
                if xi >= head {
                    *w
                } else if xi <= tail {
                    Primitive::new(w.rho * (ps / w.p).powf(1.0 / g), us, ps)
                } else {
                    let c = 2.0 / (g + 1.0) - gm / a * (w.u - xi);
                    Primitive::new(
                        w.rho * c.powf(2.0 / (g - 1.0)),
                        2.0 / (g + 1.0) * (-a + 0.5 * (g - 1.0) * w.u + xi),
                        w.p * c.powf(2.0 * g / (g - 1.0)),
                    )
                }
            }
        }
    }

    /// Cell averages of the density at time `t` over cells centred at
    /// `centers` with width `dx`, by composite midpoint quadrature.
    pub fn density_averages(
        &self,
        centers: &[f64],
        dx: f64,
        x0: f64,
        t: f64,
        sub: usize,
    ) -> Vec<f64> {
        centers
            .iter()
            .map(|&xc| {
                (0..sub)
                    .map(|k| {
                        let x = xc - 0.5 * dx + (k as f64 + 0.5) * dx / sub as f64;
                        self.sample((x - x0) / t).rho
                    })
                    .sum::<f64>()
                    / sub as f64
            })
            .collect()
    }
}

fn star_pressure(left: &Primitive, right: &Primitive, gamma: f64) -> Result<f64, RiemannError> {
    let f = |p: f64| pressure_function(p, left, right, gamma);

    // f(0+) < 0 is guaranteed by the vacuum check; find hi with f(hi) > 0
    let mut lo = 0.0;
    let mut hi = left.p.max(right.p);
    let mut grow = 0;
    while f(hi).0 <= 0.0 {
        lo = hi;
        hi *= 2.0;
        grow += 1;
        if grow > 2000 {
            return Err(RiemannError::NoConvergence);
        }
    }

    // primitive-variable linearisation as the starting guess
    let (a_l, a_r) = (sound_speed(left, gamma), sound_speed(right, gamma));
    let pvrs = 0.5 * (left.p + right.p)
        - 0.125 * (right.u - left.u) * (left.rho + right.rho) * (a_l + a_r);
    let mut p = if pvrs > lo && pvrs < hi {
        pvrs
    } else {
        0.5 * (lo + hi)
    };

    for _ in 0..MAX_ITER {
        let (fp, dfp) = f(p);
        if fp == 0.0 {
            return Ok(p);
        }
        if fp < 0.0 {
            lo = p;
        } else {
            hi = p;
        }
        let newton = p - fp / dfp;
        let next = if newton > lo && newton < hi && newton.is_finite() {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - p).abs() <= REL_TOL * 1e-2 * next.abs() || hi - lo <= REL_TOL * 1e-2 * hi {
            return Ok(next);
        }
        p = next;
    }
    Err(RiemannError::NoConvergence)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sod() -> (Primitive, Primitive) {
        (
            Primitive::new(1.0, 0.0, 1.0),
            Primitive::new(0.125, 0.0, 0.1),
        )
    }

    /// Plain bisection on the same pressure function.
    fn bisect(left: &Primitive, right: &Primitive, g: f64) -> f64 {
        let (mut lo, mut hi) = (1e-12, 1e4);
        for _ in 0..300 {
            let mid = 0.5 * (lo + hi);
            if pressure_function(mid, left, right, g).0 < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn sod_star_state() {
        let (l, r) = sod();
        let rs = ExactRiemann::new(l, r, 1.4).unwrap();
        let star = rs.star();
        assert!((star.p - 0.30313).abs() < 1e-5, "{}", star.p);
        assert!((star.p - bisect(&l, &r, 1.4)).abs() <= 1e-12 * star.p);
        assert!((star.u - 0.92745).abs() < 1e-5, "{}", star.u);
        // post-shock and contact densities
        assert!((rs.sample(1.5).rho - 0.26557).abs() < 1e-5);
        assert!((rs.sample(0.5).rho - 0.42632).abs() < 1e-5);
    }

    #[test]
    fn uniform_state_is_constant() {
        let w = Primitive::new(0.7, 0.3, 2.0);
        let rs = ExactRiemann::new(w, w, 1.4).unwrap();
        for xi in [-5.0, -0.1, 0.3, 0.31, 4.0] {
            let s = rs.sample(xi);
            assert!((s.rho - w.rho).abs() < 1e-12);
            assert!((s.u - w.u).abs() < 1e-12);
            assert!((s.p - w.p).abs() < 1e-12);
        }
    }

    #[test]
    fn symmetric_collision_has_zero_star_velocity() {
        let rs = ExactRiemann::new(
            Primitive::new(1.0, 2.0, 1.0),
            Primitive::new(1.0, -2.0, 1.0),
            1.4,
        )
        .unwrap();
        assert!(rs.star().u.abs() < 1e-13);
        assert!(rs.star().p > 1.0);
        let rs = ExactRiemann::new(
            Primitive::new(1.0, -1.0, 1.0),
            Primitive::new(1.0, 1.0, 1.0),
            1.4,
        )
        .unwrap();
        assert!(rs.star().u.abs() < 1e-13);
        assert!(rs.star().p < 1.0);
    }

    #[test]
    fn vacuum_detected() {
        let e = ExactRiemann::new(
            Primitive::new(1.0, -20.0, 1.0),
            Primitive::new(1.0, 20.0, 1.0),
            1.4,
        );
        assert!(matches!(e, Err(RiemannError::VacuumFormation { .. })));
    }

    #[test]
    fn strong_shock_tube() {
        // left blast wave of Woodward and Colella: p* = 460.894
        let l = Primitive::new(1.0, 0.0, 1000.0);
        let r = Primitive::new(1.0, 0.0, 0.01);
        let rs = ExactRiemann::new(l, r, 1.4).unwrap();
        assert!((rs.star().p - 460.894).abs() < 1e-3);
        assert!((rs.star().p - bisect(&l, &r, 1.4)).abs() <= 1e-12 * rs.star().p);
    }

    #[test]
    fn rankine_hugoniot_across_right_shock() {
        let (l, r) = sod();
        let g = 1.4;
        let rs = ExactRiemann::new(l, r, g).unwrap();
        let post = rs.sample(1.6);
        let a = sound_speed(&r, g);
        let speed = r.u + a * ((g + 1.0) / (2.0 * g) * post.p / r.p + (g - 1.0) / (2.0 * g)).sqrt();
        let energy = |w: &Primitive| w.p / (g - 1.0) + 0.5 * w.rho * w.u * w.u;
        let jump_mass = post.rho * post.u - r.rho * r.u - speed * (post.rho - r.rho);
        let jump_mom = (post.rho * post.u * post.u + post.p)
            - (r.rho * r.u * r.u + r.p)
            - speed * (post.rho * post.u - r.rho * r.u);
        let jump_e = (energy(&post) + post.p) * post.u
            - (energy(&r) + r.p) * r.u
            - speed * (energy(&post) - energy(&r));
        for j in [jump_mass, jump_mom, jump_e] {
            assert!(j.abs() < 1e-10, "{j}");
        }
    }
}
