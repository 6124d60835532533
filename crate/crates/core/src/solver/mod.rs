//! One-dimensional finite-volume solver for the Euler equations with a
//! general equation of state.
//!
//! The second-order scheme reconstructs piecewise-linear states with
//! minmod slopes, limits every reconstruction into the invariant region and
//! advances with two-stage SSP Runge-Kutta using the local Lax-Friedrichs
//! flux. A step whose new cell averages leave the region is rejected and
//! retried with half the time step.

mod flux;
mod grid;
mod reconstruct;

pub use flux::{close_state, numerical_flux, physical_flux, ClosedState};
pub use grid::{Boundary, Grid1D};
pub use reconstruct::{cell_slope, minmod, muscl_reconstruct, with_ghosts};

use rayon::prelude::*;

use crate::eos::{Eos, ThermoState};
use crate::error::{Error, Result};
use crate::limiter::{apply_irp_limiter, CellPolynomial, LimiterOutcome};
use crate::state::{ConservedState, InvariantRegion};

/// Largest CFL number accepted for the second-order scheme.
pub const MAX_SECOND_ORDER_CFL: f64 = 0.9;
/// Time-step halvings before a step is declared failed.
pub const MAX_REJECTIONS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeOrder {
    /// Local Lax-Friedrichs on cell averages, forward Euler in time.
    First,
    /// MUSCL reconstruction, IRP limiting, SSP-RK2.
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SlopeLimiter {
    Minmod,
    /// Unlimited central slope.
    None,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub cfl: f64,
    pub order: SchemeOrder,
    pub slope_limiter: SlopeLimiter,
    pub t_final: f64,
    pub irp_enabled: bool,
    pub max_steps: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            cfl: 0.4,
            order: SchemeOrder::Second,
            slope_limiter: SlopeLimiter::Minmod,
            t_final: 0.2,
            irp_enabled: true,
            max_steps: 1_000_000,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "cfl",
                reason: format!("must be in (0, 1], got {}", self.cfl),
            });
        }
        if self.order == SchemeOrder::Second && self.cfl > MAX_SECOND_ORDER_CFL {
            return Err(Error::InvalidParameter {
                name: "cfl",
                reason: format!(
                    "must be <= {MAX_SECOND_ORDER_CFL} for the second-order scheme, got {}",
                    self.cfl
                ),
            });
        }
        if !(self.t_final > 0.0) || !self.t_final.is_finite() {
            return Err(Error::InvalidParameter {
                name: "t_final",
                reason: format!("must be positive, got {}", self.t_final),
            });
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidParameter {
                name: "max_steps",
                reason: "must be positive".into(),
            });
        }
        Ok(())
    }
}

/// Primitive state `(ρ, u, P)` used for initial data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrimitiveState {
    pub rho: f64,
    pub u: f64,
    pub p: f64,
}

impl PrimitiveState {
    pub fn new(rho: f64, u: f64, p: f64) -> Self {
        Self { rho, u, p }
    }

    /// Conserved state and specific entropy under `eos`.
    pub fn to_conserved<E: Eos + ?Sized>(&self, eos: &E) -> Result<(ConservedState<1>, f64)> {
        if !(self.rho > 0.0) || !(self.p > 0.0) || !self.u.is_finite() {
            return Err(Error::Domain(format!(
                "need rho > 0 and P > 0, got rho = {}, P = {}",
                self.rho, self.p
            )));
        }
        let v = 1.0 / self.rho;
        let s = eos.entropy_from_pv(self.p, v)?;
        let ts = ThermoState::new(s, v)?;
        eos.check_domain(ts)?;
        let e = eos.energy(ts);
        let w = ConservedState::new(
            self.rho,
            [self.rho * self.u],
            self.rho * e + 0.5 * self.rho * self.u * self.u,
        );
        Ok((w, s))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    pub cells: Vec<ConservedState<1>>,
    pub time: f64,
    pub step: usize,
}

impl FieldState {
    /// `Σ Δx w̄` per component.
    pub fn totals(&self, dx: f64) -> ConservedState<1> {
        self.cells
            .iter()
            .fold(ConservedState::ZERO, |acc, w| acc + *w)
            * dx
    }
}

/// Per-step record of the runtime invariants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepDiagnostics {
    pub step: usize,
    pub time: f64,
    pub dt: f64,
    pub min_entropy: f64,
    pub min_rho: f64,
    pub min_internal_energy: f64,
    pub totals: ConservedState<1>,
    pub min_limiter_theta: f64,
    pub limited_fraction: f64,
    pub min_fundamental_derivative: f64,
    pub rejections: usize,
}

/// Gauss-Legendre nodes on `[-1/2, 1/2]` and weights summing to one.
const GAUSS3: [(f64, f64); 3] = [
    (-0.387_298_334_620_741_7, 5.0 / 18.0),
    (0.0, 8.0 / 18.0),
    (0.387_298_334_620_741_7, 5.0 / 18.0),
];

/// Exact cell averaging by three-point Gauss quadrature. The entropy floor
/// `s₀` is the minimum initial entropy over all quadrature points.
pub fn initialize<E, F>(
    grid: &Grid1D,
    initial_data: F,
    eos: &E,
) -> Result<(FieldState, InvariantRegion)>
where
    E: Eos + ?Sized,
    F: Fn(f64) -> PrimitiveState,
{
    let dx = grid.dx();
    let mut cells = Vec::with_capacity(grid.n_cells);
    let mut s0 = f64::INFINITY;
    for i in 0..grid.n_cells {
        let xc = grid.cell_center(i);
        let mut avg = ConservedState::ZERO;
        for (node, weight) in GAUSS3 {
            let x = xc + node * dx;
            let (w, s) =
                initial_data(x)
                    .to_conserved(eos)
                    .map_err(|e| Error::InadmissibleInitialData {
                        x,
                        reason: e.to_string(),
                    })?;
            avg += w * weight;
            s0 = s0.min(s);
        }
        cells.push(avg);
    }
    let slack = 1e-12 * s0.abs().max(eos.reference_scales().entropy);
    let region = InvariantRegion::new(s0).with_entropy_slack(slack);
    Ok((
        FieldState {
            cells,
            time: 0.0,
            step: 0,
        },
        region,
    ))
}

/// Maximum of `|u| + a` over the cell averages.
pub fn max_wave_speed<E: Eos + ?Sized>(cells: &[ConservedState<1>], eos: &E) -> Result<f64> {
    let speeds: Result<Vec<f64>> = cells
        .par_iter()
        .with_min_len(256)
        .map(|w| close_state(w, eos).map(|c| c.wave_speed()))
        .collect();
    Ok(speeds?.into_iter().fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy)]
struct LimiterStats {
    min_theta: f64,
    limited: usize,
    cells: usize,
}

impl LimiterStats {
    const NONE: Self = Self {
        min_theta: 1.0,
        limited: 0,
        cells: 0,
    };

    fn merge(self, other: Self) -> Self {
        Self {
            min_theta: self.min_theta.min(other.min_theta),
            limited: self.limited + other.limited,
            cells: self.cells + other.cells,
        }
    }
}

/// Reconstructions for cells `-1..=n` (one ghost layer per side), limited
/// into the region when IRP is enabled.
pub fn reconstruct_and_limit<E: Eos + ?Sized>(
    cells: &[ConservedState<1>],
    grid: &Grid1D,
    config: &SolverConfig,
    eos: &E,
    region: &InvariantRegion,
) -> Result<Vec<LimiterOutcome<1>>> {
    let polys: Vec<CellPolynomial<1>> = match config.order {
        SchemeOrder::First => with_ghosts(cells, grid.boundary)[1..cells.len() + 3]
            .iter()
            .map(|w| CellPolynomial::constant(*w))
            .collect(),
        SchemeOrder::Second => muscl_reconstruct(cells, grid, config.slope_limiter),
    };
    if !config.irp_enabled || config.order == SchemeOrder::First {
        return Ok(polys
            .into_iter()
            .map(|p| LimiterOutcome {
                theta: 1.0,
                per_constraint_thetas: [1.0; 3],
                limited: p,
                activated: false,
            })
            .collect());
    }
    polys
        .par_iter()
        .with_min_len(64)
        .map(|p| apply_irp_limiter(p, eos, region))
        .collect()
}

/// Spatial operator `-(F_{i+1/2} - F_{i-1/2}) / Δx`.
fn rhs<E: Eos + ?Sized>(
    cells: &[ConservedState<1>],
    grid: &Grid1D,
    config: &SolverConfig,
    eos: &E,
    region: &InvariantRegion,
) -> Result<(Vec<ConservedState<1>>, LimiterStats)> {
    let n = cells.len();
    let outcomes = reconstruct_and_limit(cells, grid, config, eos, region)?;
    let interior = &outcomes[1..n + 1];
    let stats = LimiterStats {
        min_theta: interior.iter().map(|o| o.theta).fold(1.0, f64::min),
        limited: interior.iter().filter(|o| o.activated).count(),
        cells: n,
    };
    let fluxes: Result<Vec<ConservedState<1>>> = (0..n + 1)
        .into_par_iter()
        .with_min_len(64)
        .map(|j| {
            numerical_flux(
                &outcomes[j].limited.right(),
                &outcomes[j + 1].limited.left(),
                eos,
            )
        })
        .collect();
    let fluxes = fluxes?;
    let inv_dx = 1.0 / grid.dx();
    let du = fluxes.windows(2).map(|f| (f[1] - f[0]) * -inv_dx).collect();
    Ok((du, stats))
}

fn is_retryable(err: &Error) -> bool {
    matches!(
        err,
        Error::AverageOutsideRegion { .. }
            | Error::NonphysicalState(_)
            | Error::NonhyperbolicState { .. }
            | Error::NoPhysicalRoot { .. }
            | Error::Domain(_)
    )
}

fn check_averages<E: Eos + ?Sized>(
    cells: &[ConservedState<1>],
    eos: &E,
    region: &InvariantRegion,
) -> Result<()> {
    let bad = cells
        .par_iter()
        .with_min_len(256)
        .position_first(|w| !region.contains(w, eos));
    match bad {
        None => Ok(()),
        Some(i) => {
            let c = region
                .membership(&cells[i], eos)
                .violated()
                .expect("non-member");
            Err(Error::AverageOutsideRegion {
                constraint: c,
                value: f64::NAN,
            })
        }
    }
}

fn attempt<E: Eos + ?Sized>(
    cells: &[ConservedState<1>],
    dt: f64,
    grid: &Grid1D,
    config: &SolverConfig,
    eos: &E,
    region: &InvariantRegion,
) -> Result<(Vec<ConservedState<1>>, LimiterStats)> {
    let euler = |base: &[ConservedState<1>]| -> Result<(Vec<ConservedState<1>>, LimiterStats)> {
        let (du, stats) = rhs(base, grid, config, eos, region)?;
        let next: Vec<_> = base.iter().zip(&du).map(|(w, d)| *w + *d * dt).collect();
        check_averages(&next, eos, region)?;
        Ok((next, stats))
    };
    match config.order {
        SchemeOrder::First => euler(cells),
        SchemeOrder::Second => {
            let (stage1, s1) = euler(cells)?;
            let (stage2, s2) = euler(&stage1)?;
            let next: Vec<_> = cells
                .iter()
                .zip(&stage2)
                .map(|(a, b)| (*a + *b) * 0.5)
                .collect();
            check_averages(&next, eos, region)?;
            Ok((next, s1.merge(s2)))
        }
    }
}

/// Advances one time step of size `min(cfl Δx / max(|u| + a), dt_cap)`,
/// halving it on rejection.
pub fn step<E: Eos + ?Sized>(
    field: &FieldState,
    config: &SolverConfig,
    grid: &Grid1D,
    eos: &E,
    region: &InvariantRegion,
    dt_cap: Option<f64>,
) -> Result<(FieldState, StepDiagnostics)> {
    let speed = max_wave_speed(&field.cells, eos)?;
    let mut dt = config.cfl * grid.dx() / speed;
    if let Some(cap) = dt_cap {
        dt = dt.min(cap);
    }
    let mut rejections = 0;
    loop {
        match attempt(&field.cells, dt, grid, config, eos, region) {
            Ok((cells, stats)) => {
                let next = FieldState {
                    cells,
                    time: field.time + dt,
                    step: field.step + 1,
                };
                let diag = diagnostics(&next, grid, eos, dt, stats, rejections)?;
                return Ok((next, diag));
            }
            Err(e) if is_retryable(&e) => {
                rejections += 1;
                if rejections > MAX_REJECTIONS {
                    return Err(Error::StepFailure {
                        step: field.step + 1,
                        time: field.time,
                        rejections,
                    });
                }
                dt *= 0.5;
            }
            Err(e) => return Err(e),
        }
    }
}

fn diagnostics<E: Eos + ?Sized>(
    field: &FieldState,
    grid: &Grid1D,
    eos: &E,
    dt: f64,
    stats: LimiterStats,
    rejections: usize,
) -> Result<StepDiagnostics> {
    let per_cell: Result<Vec<(f64, f64, f64, f64)>> = field
        .cells
        .par_iter()
        .with_min_len(256)
        .map(|w| {
            let c = close_state(w, eos)?;
            let d = eos.derivatives(ThermoState { s: c.s, v: c.v });
            let fundamental = -0.5 * c.v * d.f_vvv / d.f_vv;
            Ok((c.s, w.rho, w.internal_energy()?, fundamental))
        })
        .collect();
    let mut min = (f64::INFINITY, f64::INFINITY, f64::INFINITY, f64::INFINITY);
    for (s, rho, r, g) in per_cell? {
        min = (min.0.min(s), min.1.min(rho), min.2.min(r), min.3.min(g));
    }
    Ok(StepDiagnostics {
        step: field.step,
        time: field.time,
        dt,
        min_entropy: min.0,
        min_rho: min.1,
        min_internal_energy: min.2,
        totals: field.totals(grid.dx()),
        min_limiter_theta: stats.min_theta,
        limited_fraction: if stats.cells == 0 {
            0.0
        } else {
            stats.limited as f64 / stats.cells as f64
        },
        min_fundamental_derivative: min.3,
        rejections,
    })
}

/// Final state and the diagnostics time series of a run.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub field: FieldState,
    pub region: InvariantRegion,
    pub diagnostics: Vec<StepDiagnostics>,
    pub warnings: Vec<String>,
}

/// Stateful driver: owns the field and accumulates diagnostics.
pub struct Solver<'a, E: Eos + ?Sized> {
    pub config: SolverConfig,
    pub grid: Grid1D,
    eos: &'a E,
    region: InvariantRegion,
    field: FieldState,
    diagnostics: Vec<StepDiagnostics>,
    warnings: Vec<String>,
}

impl<'a, E: Eos + ?Sized> Solver<'a, E> {
    pub fn new<F>(config: SolverConfig, grid: Grid1D, eos: &'a E, initial_data: F) -> Result<Self>
    where
        F: Fn(f64) -> PrimitiveState,
    {
        config.validate()?;
        let (field, region) = initialize(&grid, initial_data, eos)?;
        Self::from_field(config, grid, eos, field, region)
    }

    pub fn from_field(
        config: SolverConfig,
        grid: Grid1D,
        eos: &'a E,
        field: FieldState,
        region: InvariantRegion,
    ) -> Result<Self> {
        config.validate()?;
        let initial = diagnostics(&field, &grid, eos, 0.0, LimiterStats::NONE, 0)?;
        let mut solver = Self {
            config,
            grid,
            eos,
            region,
            field,
            diagnostics: Vec::new(),
            warnings: Vec::new(),
        };
        solver.record(initial);
        Ok(solver)
    }

    fn record(&mut self, d: StepDiagnostics) {
        if !(d.min_fundamental_derivative > 0.0) {
            self.warnings.push(format!(
                "step {}: fundamental derivative {} <= 0",
                d.step, d.min_fundamental_derivative
            ));
        }
        self.diagnostics.push(d);
    }

    pub fn field(&self) -> &FieldState {
        &self.field
    }

    pub fn region(&self) -> &InvariantRegion {
        &self.region
    }

    pub fn eos(&self) -> &E {
        self.eos
    }

    pub fn diagnostics(&self) -> &[StepDiagnostics] {
        &self.diagnostics
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn step(&mut self, dt_cap: Option<f64>) -> Result<&StepDiagnostics> {
        let (next, diag) = step(
            &self.field,
            &self.config,
            &self.grid,
            self.eos,
            &self.region,
            dt_cap,
        )?;
        self.field = next;
        self.record(diag);
        Ok(self.diagnostics.last().expect("just recorded"))
    }

    /// Steps until `time == target` (the last step is shortened to land on it).
    pub fn advance_to(&mut self, target: f64) -> Result<()> {
        while self.field.time < target {
            if self.field.step >= self.config.max_steps {
                return Err(Error::MaxStepsExceeded {
                    max_steps: self.config.max_steps,
                    time: self.field.time,
                    t_final: self.config.t_final,
                });
            }
            let remaining = target - self.field.time;
            self.step(Some(remaining))?;
            if target - self.field.time <= 1e-14 * target.abs().max(1.0) {
                self.field.time = target;
                if let Some(d) = self.diagnostics.last_mut() {
                    d.time = target;
                }
            }
        }
        Ok(())
    }

    pub fn finish(self) -> RunReport {
        RunReport {
            field: self.field,
            region: self.region,
            diagnostics: self.diagnostics,
            warnings: self.warnings,
        }
    }
}

/// Runs from the initial data to `config.t_final`.
pub fn run<E, F>(
    config: &SolverConfig,
    grid: &Grid1D,
    initial_data: F,
    eos: &E,
) -> Result<RunReport>
where
    E: Eos + ?Sized,
    F: Fn(f64) -> PrimitiveState,
{
    let mut solver = Solver::new(*config, *grid, eos, initial_data)?;
    solver.advance_to(config.t_final)?;
    Ok(solver.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::Polytropic;

    fn air() -> Polytropic {
        Polytropic::new(1.4, 1.0).unwrap()
    }

    #[test]
    fn config_validation() {
        let mut c = SolverConfig::default();
        assert!(c.validate().is_ok());
        c.cfl = 0.95;
        assert!(c.validate().is_err());
        c.order = SchemeOrder::First;
        assert!(c.validate().is_ok());
        c.cfl = 1.5;
        assert!(c.validate().is_err());
        let c = SolverConfig {
            t_final: 0.0,
            ..SolverConfig::default()
        };
        assert!(c.validate().is_err());
    }

    #[test]
    fn uniform_initialization() {
        let eos = air();
        let grid = Grid1D::new(8, 0.0, 1.0, Boundary::Periodic).unwrap();
        let (field, region) =
            initialize(&grid, |_| PrimitiveState::new(1.0, 0.5, 1.0), &eos).unwrap();
        let s = eos.entropy_from_pv(1.0, 1.0).unwrap();
        assert!((region.s0 - s).abs() < 1e-15);
        for w in &field.cells {
            assert!((*w - field.cells[0]).max_abs() == 0.0);
            assert!((w.rho - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn sod_entropy_floor_is_minimum_of_both_sides() {
        let eos = air();
        let grid = Grid1D::new(10, 0.0, 1.0, Boundary::Transmissive).unwrap();
        let sod = |x: f64| {
            if x < 0.5 {
                PrimitiveState::new(1.0, 0.0, 1.0)
            } else {
                PrimitiveState::new(0.125, 0.0, 0.1)
            }
        };
        let (_, region) = initialize(&grid, sod, &eos).unwrap();
        let s_left = (1.0f64 / 0.4).ln();
        let s_right = (0.1f64 / (0.4 * 0.125f64.powf(1.4))).ln();
        // the high-pressure side has the lower entropy
        assert!(s_left < s_right);
        assert!((region.s0 - s_left.min(s_right)).abs() < 1e-14);
    }

    #[test]
    fn linear_density_averages_to_midpoint() {
        let eos = air();
        let grid = Grid1D::new(5, 0.0, 1.0, Boundary::Transmissive).unwrap();
        let (field, _) =
            initialize(&grid, |x| PrimitiveState::new(1.0 + x, 0.0, 1.0), &eos).unwrap();
        for (i, w) in field.cells.iter().enumerate() {
            assert!((w.rho - (1.0 + grid.cell_center(i))).abs() < 1e-15);
        }
    }

    #[test]
    fn inadmissible_initial_data_names_location() {
        let eos = air();
        let grid = Grid1D::new(4, 0.0, 1.0, Boundary::Transmissive).unwrap();
        let err = initialize(
            &grid,
            |x| PrimitiveState::new(1.0, 0.0, if x > 0.5 { -1.0 } else { 1.0 }),
            &eos,
        )
        .unwrap_err();
        match err {
            Error::InadmissibleInitialData { x, .. } => assert!(x > 0.5 && x < 0.75),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn uniform_state_is_an_equilibrium() {
        let eos = air();
        let grid = Grid1D::new(16, 0.0, 1.0, Boundary::Periodic).unwrap();
        for order in [SchemeOrder::First, SchemeOrder::Second] {
            let config = SolverConfig {
                order,
                ..SolverConfig::default()
            };
            let mut solver =
                Solver::new(config, grid, &eos, |_| PrimitiveState::new(1.3, 0.7, 2.0)).unwrap();
            let w0 = solver.field().cells[0];
            for _ in 0..5 {
                solver.step(None).unwrap();
            }
            for w in &solver.field().cells {
                assert!((*w - w0).max_abs() <= 1e-14 * w0.max_abs());
            }
        }
    }
}
