use super::grid::{Boundary, Grid1D};
use super::SlopeLimiter;
use crate::limiter::CellPolynomial;
use crate::state::ConservedState;

/// Ghost layers on each side of the grid.
pub const GHOSTS: usize = 2;

pub fn minmod(a: f64, b: f64) -> f64 {
    if a > 0.0 && b > 0.0 {
        a.min(b)
    } else if a < 0.0 && b < 0.0 {
        a.max(b)
    } else {
        0.0
    }
}

fn reflect(w: ConservedState<1>) -> ConservedState<1> {
    ConservedState::new(w.rho, [-w.m[0]], w.energy)
}

/// Cell averages padded with [`GHOSTS`] ghost cells per side.
pub fn with_ghosts(cells: &[ConservedState<1>], boundary: Boundary) -> Vec<ConservedState<1>> {
    let n = cells.len();
    let mut ext = Vec::with_capacity(n + 2 * GHOSTS);
    let ghost = |k: isize| -> ConservedState<1> {
        match boundary {
            Boundary::Periodic => cells[k.rem_euclid(n as isize) as usize],
            Boundary::Transmissive => cells[k.clamp(0, n as isize - 1) as usize],
            Boundary::Reflective => {
                if k < 0 {
                    reflect(cells[((-k - 1) as usize).min(n - 1)])
                } else {
                    reflect(cells[(2 * n - 1 - k as usize).min(n - 1)])
                }
            }
        }
    };
    for k in -(GHOSTS as isize)..0 {
        ext.push(ghost(k));
    }
    ext.extend_from_slice(cells);
    for k in n..n + GHOSTS {
        ext.push(ghost(k as isize));
    }
    ext
}

/// Slope (increment across the cell) from the two one-sided differences.
pub fn cell_slope(
    left: &ConservedState<1>,
    center: &ConservedState<1>,
    right: &ConservedState<1>,
    limiter: SlopeLimiter,
) -> ConservedState<1> {
    let back = *center - *left;
    let fwd = *right - *center;
    match limiter {
        SlopeLimiter::Minmod => back.zip_with(&fwd, minmod),
        SlopeLimiter::None => (back + fwd) * 0.5,
    }
}

/// Piecewise-linear reconstruction of the interior cells plus one ghost
/// layer per side (`n + 2` polynomials), in conserved variables.
pub fn muscl_reconstruct(
    cells: &[ConservedState<1>],
    grid: &Grid1D,
    limiter: SlopeLimiter,
) -> Vec<CellPolynomial<1>> {
    let ext = with_ghosts(cells, grid.boundary);
    ext.windows(3)
        .map(|win| CellPolynomial::linear(win[1], cell_slope(&win[0], &win[1], &win[2], limiter)))
        .collect()
}
