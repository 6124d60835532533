//! Central-difference Hessians in conserved variables `(ρ, m, E)`.
//!
//! Second differences are taken along a basis adapted to the state rather
//! than along the coordinate axes:
//!
//! - `b₁ = α (ρ, m, E + P)` compresses the state along its isentrope at
//!   fixed `u`,
//! - `b₂ = c (0, ρ, m)` shifts the velocity by `c = sqrt(T/ρ)` at fixed `ρ`
//!   and, to first order, fixed `R`,
//! - `b₃ = (0, 0, T)` changes the internal energy alone.
//!
//! `T` is the thermal part of the internal energy density, `ρθc_v`, and `α`
//! shortens the compression step where the isentrope is stiff. Without an
//! equation of state at hand `P = 0`, `T = R` and `α = 1` are used.
//!
//! With `M = [b₁ b₂ b₃]` the difference Hessian `H_y = Mᵀ H M` is mapped back
//! exactly as `H = M⁻ᵀ H_y M⁻¹`. Axis-aligned steps cannot resolve `R` when
//! the kinetic energy dominates `E`, and the determinant of `H` then loses
//! every significant digit.

use nalgebra::Matrix3;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FdError {
    #[error("stencil point {0:?} leaves rho > 0, R > 0")]
    Domain([f64; 3]),
    /// `point` is the stencil point, or its displacement for
    /// [`fd_hessian_in_basis`].
    #[error("function not evaluable at {point:?}: {reason}")]
    Evaluation { point: [f64; 3], reason: String },
}

/// Internal energy density `E - m²/(2ρ)` with the kinetic term evaluated
/// in compensated arithmetic, accurate relative to `R` even when `R ≪ E`.
pub fn internal_energy_density(w: [f64; 3]) -> f64 {
    let [rho, m, energy] = w;
    let p = m * m;
    let p_err = m.mul_add(m, -p);
    let two_rho = 2.0 * rho;
    let k = p / two_rho;
    let k_err = ((-k).mul_add(two_rho, p) + p_err) / two_rho;
    (energy - k) - k_err
}

fn admissible(w: [f64; 3]) -> bool {
    w[0] > 0.0 && internal_energy_density(w) > 0.0
}

/// Stencil directions as the columns of `M`, from the pressure, the thermal
/// energy density and the relative compression step at `w`.
pub fn stencil_basis(w: [f64; 3], pressure: f64, thermal: f64, alpha: f64) -> Matrix3<f64> {
    let [rho, m, energy] = w;
    let c = (thermal / rho).sqrt();
    Matrix3::new(
        alpha * rho,
        0.0,
        0.0,
        alpha * m,
        c * rho,
        0.0,
        alpha * (energy + pressure),
        c * m,
        thermal,
    )
}

/// Basis used when nothing is known about the function but its domain.
pub fn default_basis(w: [f64; 3]) -> Matrix3<f64> {
    stencil_basis(w, 0.0, internal_energy_density(w), 1.0)
}

/// Second differences of `g(δ)` with `δ = h M y` over the 19-point stencil.
fn directional_hessian<G>(g: &G, basis: &Matrix3<f64>, h: f64) -> Result<Matrix3<f64>, FdError>
where
    G: Fn([f64; 3]) -> Result<f64, FdError>,
{
    let eval = |y: [f64; 3]| {
        let d = basis * nalgebra::Vector3::from(y) * h;
        g([d[0], d[1], d[2]])
    };
    let unit = |i: usize, si: f64, j: usize, sj: f64| {
        let mut y = [0.0; 3];
        y[i] += si;
        y[j] += sj;
        y
    };

    let f0 = eval([0.0; 3])?;
    let mut hy = Matrix3::zeros();
    for i in 0..3 {
        let fp = eval(unit(i, 1.0, i, 0.0))?;
        let fm = eval(unit(i, -1.0, i, 0.0))?;
        hy[(i, i)] = ((fp - f0) + (fm - f0)) / (h * h);
        for j in 0..i {
            let fpp = eval(unit(i, 1.0, j, 1.0))?;
            let fpm = eval(unit(i, 1.0, j, -1.0))?;
            let fmp = eval(unit(i, -1.0, j, 1.0))?;
            let fmm = eval(unit(i, -1.0, j, -1.0))?;
            let hij = ((fpp - fpm) - (fmp - fmm)) / (4.0 * h * h);
            hy[(i, j)] = hij;
            hy[(j, i)] = hij;
        }
    }
    Ok(hy)
}

/// Difference Hessian `H_y = Mᵀ H M` along the columns of `basis`,
/// Richardson-extrapolated from steps `h` and `h/2`.
///
/// `g` is evaluated at displacements `δ` from the base point, which lets the
/// caller form `f(w + δ) - f(w)` without cancellation.
pub fn fd_hessian_in_basis<G, E>(
    g: G,
    basis: &Matrix3<f64>,
    h: f64,
) -> Result<Matrix3<f64>, FdError>
where
    G: Fn([f64; 3]) -> Result<f64, E>,
    E: std::fmt::Display,
{
    let g = |d: [f64; 3]| {
        g(d).map_err(|e| FdError::Evaluation {
            point: d,
            reason: e.to_string(),
        })
    };
    let coarse = directional_hessian(&g, basis, h)?;
    let fine = directional_hessian(&g, basis, 0.5 * h)?;
    let hy = (fine * 4.0 - coarse) / 3.0;
    Ok((hy + hy.transpose()) * 0.5)
}

/// `H = M⁻ᵀ H_y M⁻¹`, symmetrized.
pub fn to_conserved(hy: &Matrix3<f64>, basis: &Matrix3<f64>) -> Option<[[f64; 3]; 3]> {
    let inv = basis.try_inverse()?;
    let hm = inv.transpose() * hy * inv;
    Some(std::array::from_fn(|i| {
        std::array::from_fn(|j| 0.5 * (hm[(i, j)] + hm[(j, i)]))
    }))
}

/// Symmetric central-difference Hessian of `f` at `w = (ρ, m, E)` with
/// relative step `h`.
pub fn fd_hessian<F, E>(f: F, w: [f64; 3], h: f64) -> Result<[[f64; 3]; 3], FdError>
where
    F: Fn([f64; 3]) -> Result<f64, E>,
    E: std::fmt::Display,
{
    let basis = default_basis(w);
    let g = |d: [f64; 3]| -> Result<f64, FdError> {
        let p = [w[0] + d[0], w[1] + d[1], w[2] + d[2]];
        if !admissible(p) {
            return Err(FdError::Domain(p));
        }
        f(p).map_err(|e| FdError::Evaluation {
            point: p,
            reason: e.to_string(),
        })
    };
    let coarse = directional_hessian(&g, &basis, h)?;
    let fine = directional_hessian(&g, &basis, 0.5 * h)?;
    let hy = (fine * 4.0 - coarse) / 3.0;
    to_conserved(&hy, &basis).ok_or(FdError::Domain(w))
}

/// Leading principal minors of the Hessian from its stencil-basis form.
///
/// The determinant is taken as `det H_y / det(M)²`, which avoids the
/// cancellation of forming `det H` from the entries of `H`.
pub fn leading_minors_from_basis(hy: &Matrix3<f64>, basis: &Matrix3<f64>) -> [f64; 3] {
    let det_m = basis.determinant();
    let h = to_conserved(hy, basis).unwrap_or([[f64::NAN; 3]; 3]);
    let [q_rr, a, _] = leading_minors(&h);
    [q_rr, a, hy.determinant() / (det_m * det_m)]
}

/// Leading principal minors `(H₁₁, det H[..2,..2], det H)`.
pub fn leading_minors(h: &[[f64; 3]; 3]) -> [f64; 3] {
    let m = Matrix3::from_fn(|i, j| h[i][j]);
    let m2 = m.fixed_view::<2, 2>(0, 0).determinant();
    [h[0][0], m2, m.determinant()]
}

/// Smallest eigenvalue of a symmetric 3×3 matrix.
pub fn min_eigenvalue(h: &[[f64; 3]; 3]) -> f64 {
    Matrix3::from_fn(|i, j| h[i][j])
        .symmetric_eigen()
        .eigenvalues
        .min()
}

/// Largest absolute entry, used to scale eigenvalue tolerances.
pub fn matrix_scale(h: &[[f64; 3]; 3]) -> f64 {
    h.iter().flatten().fold(0.0, |a: f64, x| a.max(x.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::convert::Infallible;

    fn kinetic(w: [f64; 3]) -> Result<f64, Infallible> {
        Ok(0.5 * w[1] * w[1] / w[0])
    }

    #[test]
    fn kinetic_energy_hessian() {
        let w = [1.3, -0.7, 4.0];
        let h = fd_hessian(kinetic, w, 1e-3).unwrap();
        let (rho, m) = (w[0], w[1]);
        let exact = [
            [m * m / rho.powi(3), -m / (rho * rho), 0.0],
            [-m / (rho * rho), 1.0 / rho, 0.0],
            [0.0; 3],
        ];
        let scale = matrix_scale(&exact);
        for i in 0..3 {
            for j in 0..3 {
                assert!(
                    (h[i][j] - exact[i][j]).abs() <= 1e-6 * scale,
                    "{i}{j}: {} vs {}",
                    h[i][j],
                    exact[i][j]
                );
            }
        }
    }

    #[test]
    fn linear_function_has_zero_hessian() {
        let f = |w: [f64; 3]| -> Result<f64, Infallible> {
            Ok(3.0 * w[0] - 2.0 * w[1] + 0.5 * w[2] + 7.0)
        };
        let h = fd_hessian(f, [2.0, 1.0, 5.0], 1e-3).unwrap();
        assert!(matrix_scale(&h) < 1e-7);
    }

    #[test]
    fn stencil_outside_domain_is_rejected() {
        // a step as large as the state itself reaches ρ = 0
        assert!(matches!(
            fd_hessian(kinetic, [1.0, 0.5, 2.0], 2.0),
            Err(FdError::Domain(_))
        ));
    }

    #[test]
    fn compensated_internal_energy() {
        // 0.5 * 0.1² / 3 rounds, the compensated form recovers the residual
        let w = [3.0, 0.1, 0.1 * 0.1 / 6.0];
        assert!(internal_energy_density(w).abs() < 1e-18);
        assert_eq!(internal_energy_density([2.0, 2.0, 3.0]), 2.0);
    }

    #[test]
    fn minors_and_eigenvalues() {
        let h = [[2.0, 1.0, 0.0], [1.0, 2.0, 1.0], [0.0, 1.0, 2.0]];
        let [a, b, c] = leading_minors(&h);
        assert_eq!(a, 2.0);
        assert!((b - 3.0).abs() < 1e-14);
        assert!((c - 4.0).abs() < 1e-14);
        assert!((min_eigenvalue(&h) - (2.0 - 2f64.sqrt())).abs() < 1e-14);
    }

    #[test]
    fn minors_do_not_depend_on_the_stencil_basis() {
        let f = |w: [f64; 3]| -> Result<f64, Infallible> {
            let e = internal_energy_density(w) / w[0];
            Ok(-w[0] * (e.ln() + 0.4 * (1.0 / w[0]).ln()))
        };
        let w = [0.8, 0.3, 2.5];
        let basis = stencil_basis(w, 0.7, 1.2, 0.5);
        let g = |d: [f64; 3]| f([w[0] + d[0], w[1] + d[1], w[2] + d[2]]);
        let hy = fd_hessian_in_basis(g, &basis, 1e-3).unwrap();
        let direct = leading_minors(&fd_hessian(f, w, 1e-3).unwrap());
        let via_basis = leading_minors_from_basis(&hy, &basis);
        for (a, b) in direct.iter().zip(via_basis) {
            assert!((a - b).abs() <= 1e-7 * a.abs(), "{direct:?} {via_basis:?}");
        }
    }
}
