//! CSV writers. Numbers are written as `{:.16e}` (17 significant digits),
//! which round-trips every finite `f64` exactly.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use irp_core::solver::{close_state, FieldState, Grid1D, StepDiagnostics};
use irp_core::{Eos, InvariantRegion, StabilityReport, ThermoState};

pub const SNAPSHOT_HEADER: &str = "x,rho,u,P,e,s,q,in_sigma";
pub const DIAGNOSTICS_HEADER: &str = "step,time,dt,min_entropy,min_rho,min_internal_energy,\
mass,momentum,energy,min_limiter_theta,limited_fraction,min_fundamental_derivative,rejections";

#[derive(Debug, thiserror::Error)]
pub enum OutputError {
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("cell {index} cannot be written: {reason}")]
    Cell { index: usize, reason: String },
}

pub fn snapshot_path(dir: &Path, stem: &str, t: f64) -> PathBuf {
    dir.join(format!("{stem}_t{t:.6}.csv"))
}

pub fn diagnostics_path(dir: &Path, stem: &str) -> PathBuf {
    dir.join(format!("{stem}_diag.csv"))
}

/// One row of a field snapshot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnapshotRow {
    pub x: f64,
    pub rho: f64,
    pub u: f64,
    pub p: f64,
    pub e: f64,
    pub s: f64,
    pub q: f64,
    pub in_sigma: bool,
}

impl SnapshotRow {
    fn values(&self) -> [f64; 7] {
        [self.x, self.rho, self.u, self.p, self.e, self.s, self.q]
    }
}

pub fn snapshot_rows<E: Eos + ?Sized>(
    field: &FieldState,
    grid: &Grid1D,
    eos: &E,
    region: &InvariantRegion,
) -> Result<Vec<SnapshotRow>, OutputError> {
    field
        .cells
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let c = close_state(w, eos).map_err(|e| OutputError::Cell {
                index: i,
                reason: e.to_string(),
            })?;
            let row = SnapshotRow {
                x: grid.cell_center(i),
                rho: w.rho,
                u: c.u,
                p: c.p,
                e: c.e,
                s: c.s,
                q: w.rho * (region.s0 - c.s),
                in_sigma: region.contains(w, eos),
            };
            if row.values().iter().all(|v| v.is_finite()) {
                Ok(row)
            } else {
                Err(OutputError::Cell {
                    index: i,
                    reason: "non-finite value".into(),
                })
            }
        })
        .collect()
}

fn join(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| format!("{v:.16e}"))
        .collect::<Vec<_>>()
        .join(",")
}

/// Writes `header` and one line per row to `path`.
pub fn write_csv<I>(path: &Path, header: &str, rows: I) -> Result<(), OutputError>
where
    I: IntoIterator<Item = String>,
{
    let io_err = |source| OutputError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut out = BufWriter::new(File::create(path).map_err(io_err)?);
    writeln!(out, "{header}").map_err(io_err)?;
    for row in rows {
        writeln!(out, "{row}").map_err(io_err)?;
    }
    out.flush().map_err(io_err)
}

pub fn write_snapshot<E: Eos + ?Sized>(
    field: &FieldState,
    grid: &Grid1D,
    eos: &E,
    region: &InvariantRegion,
    path: &Path,
) -> Result<(), OutputError> {
    let rows = snapshot_rows(field, grid, eos, region)?;
    write_csv(
        path,
        SNAPSHOT_HEADER,
        rows.iter()
            .map(|r| format!("{},{}", join(&r.values()), u8::from(r.in_sigma))),
    )
}

/// Parses a file written by [`write_snapshot`].
pub fn read_snapshot(path: &Path) -> io::Result<Vec<SnapshotRow>> {
    let text = std::fs::read_to_string(path)?;
    let bad = |line: &str| io::Error::new(io::ErrorKind::InvalidData, format!("bad row: {line}"));
    let mut lines = text.lines();
    if lines.next() != Some(SNAPSHOT_HEADER) {
        return Err(io::Error::new(io::ErrorKind::InvalidData, "bad header"));
    }
    lines
        .map(|line| {
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 8 {
                return Err(bad(line));
            }
            let mut v = [0.0; 7];
            for (slot, c) in v.iter_mut().zip(&cols) {
                *slot = c.parse().map_err(|_| bad(line))?;
            }
            let in_sigma = match cols[7] {
                "1" => true,
                "0" => false,
                _ => return Err(bad(line)),
            };
            Ok(SnapshotRow {
                x: v[0],
                rho: v[1],
                u: v[2],
                p: v[3],
                e: v[4],
                s: v[5],
                q: v[6],
                in_sigma,
            })
        })
        .collect()
}

pub fn write_diagnostics(diags: &[StepDiagnostics], path: &Path) -> Result<(), OutputError> {
    write_csv(
        path,
        DIAGNOSTICS_HEADER,
        diags.iter().map(|d| {
            format!(
                "{},{},{}",
                d.step,
                join(&[
                    d.time,
                    d.dt,
                    d.min_entropy,
                    d.min_rho,
                    d.min_internal_energy,
                    d.totals.rho,
                    d.totals.m[0],
                    d.totals.energy,
                    d.min_limiter_theta,
                    d.limited_fraction,
                    d.min_fundamental_derivative,
                ]),
                d.rejections
            )
        }),
    )
}

pub const EOS_CHECK_HEADER: &str = "s,v,admissible,gamma,grueneisen,g,fundamental_derivative,\
convexity_ok,hyperbolic_ok,genuinely_nonlinear_ok,pve_bound_ok,temperature_positive";

/// One line of an eos-check sweep; `report` is `None` off the admissible domain.
pub fn eos_check_line(ts: ThermoState, report: Option<&StabilityReport>) -> String {
    match report {
        Some(r) => format!(
            "{},1,{},{},{},{},{},{}",
            join(&[ts.s, ts.v]),
            join(&[r.gamma, r.grueneisen, r.g, r.fundamental_derivative]),
            r.convexity_ok,
            r.hyperbolic_ok,
            r.genuinely_nonlinear_ok,
            r.pve_bound_ok,
            r.temperature_positive,
        ),
        None => format!("{},0,,,,,,,,,", join(&[ts.s, ts.v])),
    }
}

pub const REGION_HEADER: &str =
    "rho,u,e,q_rr,a,b,fd_q_rr,fd_a,fd_b,max_rel_diff,fd_min_eigenvalue,fd_scale,fd_spread,conditioning,verdict";

/// `verdict` is `pass`, `fail` or `unresolved`.
pub fn region_line(values: &[f64; 14], verdict: &str) -> String {
    format!("{},{verdict}", join(values))
}

pub const EXACT_HEADER: &str = "x,rho,u,P";

pub fn exact_line(x: f64, rho: f64, u: f64, p: f64) -> String {
    join(&[x, rho, u, p])
}
