use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Boundary {
    Transmissive,
    Periodic,
    Reflective,
}

impl Boundary {
    pub fn name(self) -> &'static str {
        match self {
            Boundary::Transmissive => "transmissive",
            Boundary::Periodic => "periodic",
            Boundary::Reflective => "reflective",
        }
    }
}

/// Uniform 1D grid of `n_cells` cells on `[x_min, x_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    pub n_cells: usize,
    pub x_min: f64,
    pub x_max: f64,
    pub boundary: Boundary,
}

impl Grid1D {
    pub fn new(n_cells: usize, x_min: f64, x_max: f64, boundary: Boundary) -> Result<Self> {
        if n_cells == 0 {
            return Err(Error::InvalidParameter {
                name: "n_cells",
                reason: "must be positive".into(),
            });
        }
        if !(x_max > x_min) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::InvalidParameter {
                name: "x_max",
                reason: format!("need finite x_min < x_max, got [{x_min}, {x_max}]"),
            });
        }
        Ok(Self {
            n_cells,
            x_min,
            x_max,
            boundary,
        })
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.n_cells as f64
    }

    pub fn cell_center(&self, i: usize) -> f64 {
        self.x_min + (i as f64 + 0.5) * self.dx()
    }

    pub fn cell_centers(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_cells).map(|i| self.cell_center(i))
    }
}
