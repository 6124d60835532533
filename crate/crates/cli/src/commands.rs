//! Subcommand implementations, independent of argument parsing.

use std::path::{Path, PathBuf};

use irp_core::solver::{Grid1D, Solver};
use irp_core::{Eos, EosModel, ThermoState};
use rand::{rngs::StdRng, SeedableRng};

use crate::checks::{check_region_state, CheckError};
use crate::config::{ConfigError, Document, EosConfig, InitialCondition, Preset, RunConfig};
use crate::oracle::riemann::{ExactRiemann, Primitive, RiemannError};
use crate::output::{self, OutputError};
use crate::sampling::conserved_sample;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config-error: {0}")]
    Config(#[from] ConfigError),
    #[error("runtime-error: {0}")]
    Solver(#[from] irp_core::Error),
    #[error("runtime-error: {0}")]
    Output(#[from] OutputError),
    #[error("runtime-error: {0}")]
    Riemann(#[from] RiemannError),
    #[error("runtime-error: {0}")]
    Check(#[from] CheckError),
}

impl CliError {
    /// 1 for configuration problems, 2 for failures while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            _ => 2,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn output_dir(cfg_dir: &Path, override_dir: Option<&Path>) -> CliResult<PathBuf> {
    let dir = override_dir.unwrap_or(cfg_dir).to_path_buf();
    std::fs::create_dir_all(&dir).map_err(|source| OutputError::Io {
        path: dir.clone(),
        source,
    })?;
    Ok(dir)
}

#[derive(Debug, Clone)]
pub struct SolveSummary {
    pub snapshots: Vec<PathBuf>,
    pub diagnostics: PathBuf,
    pub steps: usize,
    pub warnings: Vec<String>,
}

/// Runs the configured problem, writing one snapshot per requested time
/// and the per-step diagnostics.
pub fn solve(config_path: &Path, out_dir: Option<&Path>) -> CliResult<SolveSummary> {
    let cfg = RunConfig::read(config_path)?;
    let eos = cfg.eos.build()?;
    let stem = cfg.stem(Some(config_path));
    let dir = output_dir(&cfg.output.directory, out_dir)?;

    let profile = cfg.initial_condition.profile(&cfg.grid);
    let mut solver = Solver::new(cfg.solver, cfg.grid, &eos, profile).map_err(|e| match e {
        irp_core::Error::InadmissibleInitialData { .. } => CliError::Config(ConfigError {
            key: "initial_condition".into(),
            message: e.to_string(),
        }),
        other => other.into(),
    })?;

    let mut snapshots = Vec::new();
    for &t in &cfg.output.snapshot_times {
        solver.advance_to(t)?;
        let path = output::snapshot_path(&dir, &stem, t);
        output::write_snapshot(solver.field(), &cfg.grid, &eos, solver.region(), &path)?;
        snapshots.push(path);
    }
    solver.advance_to(cfg.solver.t_final)?;

    let diagnostics = output::diagnostics_path(&dir, &stem);
    output::write_diagnostics(solver.diagnostics(), &diagnostics)?;
    let report = solver.finish();
    Ok(SolveSummary {
        snapshots,
        diagnostics,
        steps: report.field.step,
        warnings: report.warnings,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct SweepBox {
    pub s: (f64, f64),
    pub v: (f64, f64),
    pub n_s: usize,
    pub n_v: usize,
}

impl SweepBox {
    /// Default working box of each model.
    pub fn default_for(eos: &EosConfig) -> Self {
        let (s, v) = match eos {
            EosConfig::Polytropic { .. } => ((-2.0, 2.0), (0.1, 10.0)),
            EosConfig::Tait(p) => {
                let ds = p.c * p.theta_r;
                (
                    (p.s_r - 0.9 * ds, p.s_r + 3.0 * ds),
                    (0.5 * p.v_r, 1.5 * p.v_r),
                )
            }
        };
        Self {
            s,
            v,
            n_s: 41,
            n_v: 41,
        }
    }

    fn points(&self) -> impl Iterator<Item = ThermoState> + '_ {
        let lerp = |(a, b): (f64, f64), i: usize, n: usize| {
            if n == 1 {
                a
            } else {
                a + (b - a) * i as f64 / (n - 1) as f64
            }
        };
        (0..self.n_v).flat_map(move |j| {
            (0..self.n_s).map(move |i| ThermoState {
                s: lerp(self.s, i, self.n_s),
                v: lerp(self.v, j, self.n_v),
            })
        })
    }
}

#[derive(Debug, Clone)]
pub struct EosCheckSummary {
    pub path: PathBuf,
    pub points: usize,
    pub admissible: usize,
    pub convexity_violations: usize,
    pub other_violations: usize,
}

/// Sweeps an `(s, v)` box and writes one stability report per point.
pub fn eos_check(
    config_path: &Path,
    sweep: Option<SweepBox>,
    out_dir: Option<&Path>,
) -> CliResult<EosCheckSummary> {
    let doc = Document::read(config_path)?;
    let eos_cfg = EosConfig::from_document(&doc)?;
    let eos = eos_cfg.build()?;
    let sweep = sweep.unwrap_or_else(|| SweepBox::default_for(&eos_cfg));
    let dir = output_dir(Path::new("."), out_dir)?;
    let stem = RunConfig::parse_stem(config_path);
    let path = dir.join(format!("{stem}_eos_check.csv"));

    let mut summary = EosCheckSummary {
        path: path.clone(),
        points: 0,
        admissible: 0,
        convexity_violations: 0,
        other_violations: 0,
    };
    let mut lines = Vec::new();
    for ts in sweep.points() {
        summary.points += 1;
        let report = if eos.is_admissible(ts) {
            Some(eos.check_thermo_stability(ts)?)
        } else {
            None
        };
        if let Some(r) = &report {
            summary.admissible += 1;
            if !r.convexity_ok {
                summary.convexity_violations += 1;
            }
            if !r.all_ok() {
                summary.other_violations += 1;
            }
        }
        lines.push(output::eos_check_line(ts, report.as_ref()));
    }
    output::write_csv(&path, output::EOS_CHECK_HEADER, lines)?;
    Ok(summary)
}

#[derive(Debug, Clone)]
pub struct RegionSummary {
    pub path: PathBuf,
    pub samples: usize,
    /// Samples where a resolved difference Hessian disagrees.
    pub failures: usize,
    /// Samples the difference Hessian cannot judge (see [`crate::checks::RegionCheck::resolved`]).
    pub unresolved: usize,
    pub max_rel_diff: f64,
}

/// Samples random states and compares closed-form minors of `q` with a
/// finite-difference Hessian.
pub fn verify_region(
    config_path: &Path,
    samples: usize,
    seed: u64,
    tolerance: f64,
    out_dir: Option<&Path>,
) -> CliResult<RegionSummary> {
    let doc = Document::read(config_path)?;
    let eos: EosModel = EosConfig::from_document(&doc)?.build()?;
    let dir = output_dir(Path::new("."), out_dir)?;
    let path = dir.join(format!("{}_region.csv", RunConfig::parse_stem(config_path)));

    let mut rng = StdRng::seed_from_u64(seed);
    let mut lines = Vec::with_capacity(samples);
    let mut failures = 0;
    let mut unresolved = 0;
    let mut max_rel_diff: f64 = 0.0;
    for _ in 0..samples {
        let w = conserved_sample(&eos, &mut rng);
        let c = check_region_state(&eos, &w, crate::checks::FD_STEP)?;
        let p = w.primitives()?;
        let verdict = if c.passes(tolerance) {
            "pass"
        } else if c.resolved(tolerance) {
            failures += 1;
            "fail"
        } else {
            unresolved += 1;
            "unresolved"
        };
        max_rel_diff = max_rel_diff.max(c.max_rel_diff);
        lines.push(output::region_line(
            &[
                w.rho,
                p.u[0],
                p.e,
                c.closed.q_rr,
                c.closed.a,
                c.closed.b,
                c.fd[0],
                c.fd[1],
                c.fd[2],
                c.max_rel_diff,
                c.fd_min_eigenvalue,
                c.fd_scale,
                c.fd_spread,
                c.conditioning,
            ],
            verdict,
        ));
    }
    output::write_csv(&path, output::REGION_HEADER, lines)?;
    Ok(RegionSummary {
        path,
        samples,
        failures,
        unresolved,
        max_rel_diff,
    })
}

/// Riemann data of the configured initial condition, if it is one.
pub fn riemann_data(ic: &InitialCondition, grid: &Grid1D) -> Option<(Primitive, Primitive, f64)> {
    let mid = 0.5 * (grid.x_min + grid.x_max);
    match *ic {
        InitialCondition::Riemann {
            left,
            right,
            interface,
        } => Some((
            Primitive::new(left.rho, left.u, left.p),
            Primitive::new(right.rho, right.u, right.p),
            interface,
        )),
        InitialCondition::Preset(Preset::Sod) => Some((
            Primitive::new(1.0, 0.0, 1.0),
            Primitive::new(0.125, 0.0, 0.1),
            mid,
        )),
        InitialCondition::Preset(Preset::DoubleShock) => Some((
            Primitive::new(1.0, 3.0, 1.0),
            Primitive::new(1.0, -3.0, 1.0),
            mid,
        )),
        InitialCondition::Preset(_) => None,
    }
}

/// Writes the exact solution sampled at the cell centres at time `t`
/// (default `t_final`).
pub fn riemann_exact(
    config_path: &Path,
    time: Option<f64>,
    out_dir: Option<&Path>,
) -> CliResult<PathBuf> {
    let cfg = RunConfig::read(config_path)?;
    let gamma0 = match cfg.eos {
        EosConfig::Polytropic { gamma0, .. } => gamma0,
        EosConfig::Tait(_) => {
            return Err(ConfigError {
                key: "eos.model".into(),
                message: "the exact solver supports the polytropic model only".into(),
            }
            .into())
        }
    };
    let (left, right, x0) =
        riemann_data(&cfg.initial_condition, &cfg.grid).ok_or_else(|| ConfigError {
            key: "initial_condition.type".into(),
            message: "not a Riemann problem".into(),
        })?;
    let t = time.unwrap_or(cfg.solver.t_final);
    if !(t > 0.0) {
        return Err(ConfigError {
            key: "--time".into(),
            message: "must be positive".into(),
        }
        .into());
    }
    let rs = ExactRiemann::new(left, right, gamma0)?;
    let dir = output_dir(&cfg.output.directory, out_dir)?;
    let path = dir.join(format!("{}_exact_t{t:.6}.csv", cfg.stem(Some(config_path))));
    let lines = cfg.grid.cell_centers().map(|x| {
        let w = rs.sample((x - x0) / t);
        output::exact_line(x, w.rho, w.u, w.p)
    });
    output::write_csv(&path, output::EXACT_HEADER, lines.collect::<Vec<_>>())?;
    Ok(path)
}
