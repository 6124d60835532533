//! End-to-end behaviour of the finite-volume solver.

use std::f64::consts::PI;

use irp_core::solver::{
    run, Boundary, Grid1D, PrimitiveState, SchemeOrder, SlopeLimiter, Solver, SolverConfig,
    StepDiagnostics,
};
use irp_core::{Eos, Error, Polytropic, Tait, TaitParams};

fn air() -> Polytropic {
    Polytropic::new(1.4, 1.0).unwrap()
}

fn sod(x: f64) -> PrimitiveState {
    if x < 0.5 {
        PrimitiveState::new(1.0, 0.0, 1.0)
    } else {
        PrimitiveState::new(0.125, 0.0, 0.1)
    }
}

fn double_shock(x: f64) -> PrimitiveState {
    if x < 0.5 {
        PrimitiveState::new(1.0, 3.0, 1.0)
    } else {
        PrimitiveState::new(1.0, -3.0, 1.0)
    }
}

fn wave(x: f64) -> PrimitiveState {
    PrimitiveState::new(1.0 + 0.2 * (2.0 * PI * x).sin(), 1.0, 1.0)
}

/// Exact average of the translated density of [`wave`] over `[a, b]`.
fn wave_average(a: f64, b: f64, t: f64) -> f64 {
    let k = 2.0 * PI;
    1.0 + 0.2 * ((k * (a - t)).cos() - (k * (b - t)).cos()) / (k * (b - a))
}

fn config(order: SchemeOrder, t_final: f64) -> SolverConfig {
    SolverConfig {
        order,
        t_final,
        ..SolverConfig::default()
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

#[test]
fn uniform_state_is_an_equilibrium() {
    let eos = air();
    for boundary in [Boundary::Periodic, Boundary::Transmissive] {
        let grid = Grid1D::new(32, 0.0, 1.0, boundary).unwrap();
        let report = run(
            &config(SchemeOrder::Second, 0.1),
            &grid,
            |_| PrimitiveState::new(1.3, 0.7, 2.0),
            &eos,
        )
        .unwrap();
        let w0 = report.field.cells[0];
        let (init, _) = PrimitiveState::new(1.3, 0.7, 2.0)
            .to_conserved(&eos)
            .unwrap();
        for w in &report.field.cells {
            assert!((*w - init).max_abs() <= 1e-14 * init.max_abs(), "{w:?}");
            assert_eq!(*w, w0);
        }
    }
}

#[test]
fn periodic_runs_conserve_totals() {
    let eos = air();
    let grid = Grid1D::new(100, 0.0, 1.0, Boundary::Periodic).unwrap();
    let cfg = SolverConfig {
        max_steps: 1000,
        ..config(SchemeOrder::Second, 1e9)
    };
    let mut solver = Solver::new(cfg, grid, &eos, |x| {
        // a periodic blast with strong gradients
        let p = if (0.3..0.5).contains(&x) { 10.0 } else { 0.5 };
        PrimitiveState::new(1.0 + 0.5 * (2.0 * PI * x).cos(), 0.3, p)
    })
    .unwrap();
    let start = solver.field().totals(grid.dx());
    for _ in 0..1000 {
        solver.step(None).unwrap();
    }
    let end = solver.field().totals(grid.dx());
    assert!(rel(end.rho, start.rho) < 1e-12, "{start:?} {end:?}");
    assert!((end.m[0] - start.m[0]).abs() < 1e-12 * start.max_abs());
    assert!(rel(end.energy, start.energy) < 1e-12);
    assert_eq!(solver.field().step, 1000);
}

#[test]
fn runs_are_bit_identical_across_thread_counts() {
    let eos = air();
    let grid = Grid1D::new(200, 0.0, 1.0, Boundary::Transmissive).unwrap();
    let cfg = config(SchemeOrder::Second, 0.1);
    let go = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run(&cfg, &grid, sod, &eos).unwrap())
    };
    let a = go(1);
    for threads in [1, 2, 7] {
        let b = go(threads);
        assert_eq!(a.field, b.field, "{threads} threads");
        assert_eq!(a.diagnostics, b.diagnostics, "{threads} threads");
    }
}

fn entropy_never_drops(diagnostics: &[StepDiagnostics]) {
    for pair in diagnostics.windows(2) {
        assert!(
            pair[1].min_entropy >= pair[0].min_entropy - 1e-10,
            "step {}: {} -> {}",
            pair[1].step,
            pair[0].min_entropy,
            pair[1].min_entropy
        );
    }
}

#[test]
fn minimum_entropy_principle() {
    let eos = air();
    let grid = Grid1D::new(200, 0.0, 1.0, Boundary::Transmissive).unwrap();
    for (name, data) in [
        ("sod", sod as fn(f64) -> PrimitiveState),
        ("double shock", double_shock),
    ] {
        let report = run(&config(SchemeOrder::Second, 0.15), &grid, data, &eos).unwrap();
        entropy_never_drops(&report.diagnostics);
        let last = report.diagnostics.last().unwrap();
        assert!(
            last.min_rho > 0.0 && last.min_internal_energy > 0.0,
            "{name}"
        );
        assert!(
            report
                .diagnostics
                .iter()
                .all(|d| d.min_limiter_theta >= 0.0),
            "{name}"
        );
    }
}

#[test]
fn tait_shock_tube_stays_admissible() {
    let eos = Tait::new(TaitParams::illustrative(7.15)).unwrap();
    let grid = Grid1D::new(200, 0.0, 1.0, Boundary::Transmissive).unwrap();
    let report = run(
        &config(SchemeOrder::Second, 0.05),
        &grid,
        |x| {
            if x < 0.5 {
                PrimitiveState::new(1.05, 0.0, 5.0)
            } else {
                PrimitiveState::new(1.0, 0.0, 1.0)
            }
        },
        &eos,
    )
    .unwrap();
    entropy_never_drops(&report.diagnostics);
    for w in &report.field.cells {
        assert!(report.region.contains(w, &eos), "{w:?}");
    }
}

#[test]
fn advected_entropy_bump_keeps_its_floor() {
    let eos = air();
    let grid = Grid1D::new(100, 0.0, 1.0, Boundary::Periodic).unwrap();
    // uniform u and P: density carries an entropy bump
    let bump = |x: f64| {
        let r = ((x - 0.5) / 0.2).abs().min(1.0);
        let c = (0.5 * PI * r).cos();
        PrimitiveState::new(1.0 / (1.0 + 0.5 * c * c), 1.0, 1.0)
    };
    let report = run(&config(SchemeOrder::Second, 0.25), &grid, bump, &eos).unwrap();
    let floor = report.diagnostics[0].min_entropy;
    for d in &report.diagnostics {
        assert!(
            (d.min_entropy - floor).abs() < 1e-10,
            "step {}: {}",
            d.step,
            d.min_entropy
        );
    }
    // velocity and pressure stay uniform for a contact
    for w in &report.field.cells {
        let u = w.m[0] / w.rho;
        let e = w.internal_energy().unwrap() / w.rho;
        let p = eos.pressure_from_ev(e, 1.0 / w.rho).unwrap();
        assert!(
            (u - 1.0).abs() < 1e-12 && (p - 1.0).abs() < 1e-12,
            "u {u}, p {p}"
        );
    }
}

#[test]
fn halving_the_cfl_keeps_a_run_healthy() {
    let eos = air();
    let grid = Grid1D::new(100, 0.0, 1.0, Boundary::Transmissive).unwrap();
    let mut cfg = config(SchemeOrder::Second, 0.1);
    cfg.cfl = 0.8;
    for _ in 0..4 {
        let report = run(&cfg, &grid, double_shock, &eos).unwrap();
        entropy_never_drops(&report.diagnostics);
        for w in &report.field.cells {
            assert!(report.region.contains(w, &eos), "cfl {}: {w:?}", cfg.cfl);
        }
        cfg.cfl *= 0.5;
    }
}

#[test]
fn time_steps_respect_the_cfl_bound() {
    let eos = air();
    let grid = Grid1D::new(100, 0.0, 1.0, Boundary::Transmissive).unwrap();
    let cfg = config(SchemeOrder::Second, 0.2);
    let mut solver = Solver::new(cfg, grid, &eos, sod).unwrap();
    while solver.field().time < cfg.t_final {
        let speed = irp_core::solver::max_wave_speed(&solver.field().cells, &eos).unwrap();
        let remaining = cfg.t_final - solver.field().time;
        let dt = solver.step(Some(remaining)).unwrap().dt;
        assert!(dt <= cfg.cfl * grid.dx() / speed * (1.0 + 1e-14), "{dt}");
    }
    assert!((solver.field().time - cfg.t_final).abs() < 1e-14);
}

#[test]
fn step_budget_is_enforced() {
    let eos = air();
    let grid = Grid1D::new(50, 0.0, 1.0, Boundary::Transmissive).unwrap();
    let cfg = SolverConfig {
        max_steps: 3,
        ..config(SchemeOrder::First, 0.2)
    };
    assert!(matches!(
        run(&cfg, &grid, sod, &eos),
        Err(Error::MaxStepsExceeded { max_steps: 3, .. })
    ));
}

#[test]
fn reflective_walls_keep_a_symmetric_problem_symmetric() {
    let eos = air();
    let grid = Grid1D::new(80, 0.0, 1.0, Boundary::Reflective).unwrap();
    let data = |x: f64| {
        let p = if (0.4..0.6).contains(&x) { 5.0 } else { 1.0 };
        PrimitiveState::new(1.0, 0.0, p)
    };
    let report = run(&config(SchemeOrder::Second, 0.3), &grid, data, &eos).unwrap();
    let cells = &report.field.cells;
    let n = cells.len();
    for i in 0..n / 2 {
        let (a, b) = (cells[i], cells[n - 1 - i]);
        assert!((a.rho - b.rho).abs() < 1e-12, "{i}");
        assert!((a.m[0] + b.m[0]).abs() < 1e-12, "{i}");
        assert!((a.energy - b.energy).abs() < 1e-12, "{i}");
    }
    // the walls conserve mass
    let mass: f64 = cells.iter().map(|w| w.rho).sum::<f64>() * grid.dx();
    assert!((mass - 1.0).abs() < 1e-13);
}

fn l1_density_error(order: SchemeOrder, slopes: SlopeLimiter, n: usize, t: f64) -> f64 {
    let eos = air();
    let grid = Grid1D::new(n, 0.0, 1.0, Boundary::Periodic).unwrap();
    let cfg = SolverConfig {
        slope_limiter: slopes,
        ..config(order, t)
    };
    let report = run(&cfg, &grid, wave, &eos).unwrap();
    let dx = grid.dx();
    report
        .field
        .cells
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let a = i as f64 * dx;
            (w.rho - wave_average(a, a + dx, t)).abs() * dx
        })
        .sum()
}

fn observed_orders(order: SchemeOrder, slopes: SlopeLimiter, levels: &[usize]) -> Vec<f64> {
    let errors: Vec<f64> = levels
        .iter()
        .map(|&n| l1_density_error(order, slopes, n, 0.25))
        .collect();
    errors.windows(2).map(|e| (e[0] / e[1]).log2()).collect()
}

#[test]
fn first_order_scheme_converges_at_first_order() {
    let orders = observed_orders(SchemeOrder::First, SlopeLimiter::Minmod, &[100, 200, 400]);
    let last = *orders.last().unwrap();
    assert!((0.85..1.15).contains(&last), "{orders:?}");
}

#[test]
fn second_order_scheme_converges_at_second_order() {
    let orders = observed_orders(SchemeOrder::Second, SlopeLimiter::None, &[50, 100, 200]);
    let last = *orders.last().unwrap();
    assert!(last > 1.9, "{orders:?}");
    let minmod = observed_orders(SchemeOrder::Second, SlopeLimiter::Minmod, &[50, 100, 200]);
    assert!(*minmod.last().unwrap() > 1.6, "{minmod:?}");
}
