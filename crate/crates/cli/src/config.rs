//! Run configuration files.
//!
//! The format is TOML with five sections:
//!
//! ```toml
//! [eos]
//! model = "polytropic"
//! gamma0 = 1.4
//!
//! [grid]
//! n_cells = 400
//! x_min = 0.0
//! x_max = 1.0
//! boundary = "transmissive"
//!
//! [solver]
//! t_final = 0.2
//!
//! [initial_condition]
//! type = "riemann"
//! interface = 0.5
//! left = { rho = 1.0, u = 0.0, p = 1.0 }
//! right = { rho = 0.125, u = 0.0, p = 0.1 }
//!
//! [output]
//! snapshot_times = [0.2]
//! ```
//!
//! Every error names the offending `section.key`; unknown sections and keys
//! are rejected.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use irp_core::solver::{Boundary, Grid1D, PrimitiveState, SchemeOrder, SlopeLimiter, SolverConfig};
use irp_core::{EosModel, Polytropic, Tait, TaitParams};
use toml::{Table, Value};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{key}: {message}")]
pub struct ConfigError {
    /// Dotted path of the offending entry, e.g. `grid.n_cells`.
    pub key: String,
    pub message: String,
}

impl ConfigError {
    fn new(key: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            key: key.into(),
            message: message.into(),
        }
    }
}

pub type ConfigResult<T> = std::result::Result<T, ConfigError>;

const SECTIONS: [&str; 5] = ["eos", "grid", "solver", "initial_condition", "output"];

/// One section of the document, tracking which keys were consumed.
struct Section<'a> {
    name: String,
    table: &'a Table,
}

impl<'a> Section<'a> {
    fn key(&self, k: &str) -> String {
        format!("{}.{k}", self.name)
    }

    fn reject_unknown(&self, allowed: &[&str]) -> ConfigResult<()> {
        match self.table.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(ConfigError::new(self.key(k), "unknown key")),
            None => Ok(()),
        }
    }

    fn get(&self, k: &str) -> ConfigResult<&'a Value> {
        self.table
            .get(k)
            .ok_or_else(|| ConfigError::new(self.key(k), "missing required key"))
    }

    fn float(&self, k: &str) -> ConfigResult<f64> {
        let x = match self.get(k)? {
            Value::Float(x) => *x,
            Value::Integer(i) => *i as f64,
            other => {
                return Err(ConfigError::new(
                    self.key(k),
                    format!("expected a number, found {}", other.type_str()),
                ))
            }
        };
        if x.is_finite() {
            Ok(x)
        } else {
            Err(ConfigError::new(self.key(k), "must be finite"))
        }
    }

    fn float_or(&self, k: &str, default: f64) -> ConfigResult<f64> {
        if self.table.contains_key(k) {
            self.float(k)
        } else {
            Ok(default)
        }
    }

    fn string(&self, k: &str) -> ConfigResult<&'a str> {
        match self.get(k)? {
            Value::String(s) => Ok(s),
            other => Err(ConfigError::new(
                self.key(k),
                format!("expected a string, found {}", other.type_str()),
            )),
        }
    }

    fn opt_string(&self, k: &str) -> ConfigResult<Option<&'a str>> {
        if self.table.contains_key(k) {
            self.string(k).map(Some)
        } else {
            Ok(None)
        }
    }

    fn count(&self, k: &str) -> ConfigResult<usize> {
        match self.get(k)? {
            Value::Integer(i) if *i > 0 => Ok(*i as usize),
            Value::Integer(_) => Err(ConfigError::new(self.key(k), "must be a positive integer")),
            other => Err(ConfigError::new(
                self.key(k),
                format!("expected an integer, found {}", other.type_str()),
            )),
        }
    }

    fn boolean(&self, k: &str) -> ConfigResult<bool> {
        match self.get(k)? {
            Value::Boolean(b) => Ok(*b),
            other => Err(ConfigError::new(
                self.key(k),
                format!("expected a boolean, found {}", other.type_str()),
            )),
        }
    }

    fn sub(&self, k: &str) -> ConfigResult<Section<'a>> {
        match self.get(k)? {
            Value::Table(t) => Ok(Section {
                name: self.key(k),
                table: t,
            }),
            other => Err(ConfigError::new(
                self.key(k),
                format!("expected a table, found {}", other.type_str()),
            )),
        }
    }

    fn choice<T: Copy>(&self, k: &str, options: &[(&str, T)]) -> ConfigResult<T> {
        let s = self.string(k)?;
        options
            .iter()
            .find(|(name, _)| *name == s)
            .map(|(_, v)| *v)
            .ok_or_else(|| {
                let names: Vec<_> = options.iter().map(|(n, _)| *n).collect();
                ConfigError::new(
                    self.key(k),
                    format!("unknown value {s:?}, expected one of {}", names.join(", ")),
                )
            })
    }
}

/// Parsed TOML with its top-level sections checked.
pub struct Document {
    root: Table,
}

impl Document {
    pub fn parse(text: &str) -> ConfigResult<Self> {
        let root: Table = text.parse().map_err(|e: toml::de::Error| {
            let msg = e.message().replace('\n', " ");
            ConfigError::new("<syntax>", msg.trim().to_string())
        })?;
        for (k, v) in &root {
            if !SECTIONS.contains(&k.as_str()) {
                return Err(ConfigError::new(k.clone(), "unknown section"));
            }
            if !v.is_table() {
                return Err(ConfigError::new(k.clone(), "expected a section"));
            }
        }
        Ok(Self { root })
    }

    pub fn read(path: &Path) -> ConfigResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::new("<file>", format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn section(&self, name: &str) -> ConfigResult<Section<'_>> {
        match self.root.get(name) {
            Some(Value::Table(t)) => Ok(Section {
                name: name.to_string(),
                table: t,
            }),
            _ => Err(ConfigError::new(name, "missing required section")),
        }
    }

    fn has(&self, name: &str) -> bool {
        self.root.contains_key(name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EosConfig {
    Polytropic { gamma0: f64, k: f64 },
    Tait(TaitParams),
}

const TAIT_KEYS: [&str; 9] = ["k_r", "v_r", "p_r", "s_r", "e_r", "theta_r", "nu", "c", "d"];

impl EosConfig {
    pub fn from_document(doc: &Document) -> ConfigResult<Self> {
        let sec = doc.section("eos")?;
        let model = sec.choice("model", &[("polytropic", 0), ("tait", 1)])?;
        let cfg = if model == 0 {
            sec.reject_unknown(&["model", "gamma0", "k"])?;
            EosConfig::Polytropic {
                gamma0: sec.float("gamma0")?,
                k: sec.float_or("k", 1.0)?,
            }
        } else {
            let mut allowed = vec!["model"];
            allowed.extend(TAIT_KEYS);
            sec.reject_unknown(&allowed)?;
            let [k_r, v_r, p_r, s_r, e_r, theta_r, nu, c, d] = {
                let mut vals = [0.0; 9];
                for (slot, k) in vals.iter_mut().zip(TAIT_KEYS) {
                    *slot = sec.float(k)?;
                }
                vals
            };
            EosConfig::Tait(TaitParams {
                k_r,
                v_r,
                p_r,
                s_r,
                e_r,
                theta_r,
                nu,
                c,
                d,
            })
        };
        cfg.build()?;
        Ok(cfg)
    }

    pub fn build(&self) -> ConfigResult<EosModel> {
        let model: irp_core::Result<EosModel> = match *self {
            EosConfig::Polytropic { gamma0, k } => Polytropic::new(gamma0, k).map(Into::into),
            EosConfig::Tait(p) => Tait::new(p).map(Into::into),
        };
        model.map_err(|e| param_error("eos", e))
    }

    fn write_canonical(&self, out: &mut String) {
        out.push_str("[eos]\n");
        match self {
            EosConfig::Polytropic { gamma0, k } => {
                out.push_str("model = \"polytropic\"\n");
                let _ = writeln!(out, "gamma0 = {}", float(*gamma0));
                let _ = writeln!(out, "k = {}", float(*k));
            }
            EosConfig::Tait(p) => {
                out.push_str("model = \"tait\"\n");
                let vals = [p.k_r, p.v_r, p.p_r, p.s_r, p.e_r, p.theta_r, p.nu, p.c, p.d];
                for (k, v) in TAIT_KEYS.iter().zip(vals) {
                    let _ = writeln!(out, "{k} = {}", float(v));
                }
            }
        }
    }
}

fn param_error(section: &str, e: irp_core::Error) -> ConfigError {
    match e {
        irp_core::Error::InvalidParameter { name, reason } => {
            ConfigError::new(format!("{section}.{}", name.to_lowercase()), reason)
        }
        other => ConfigError::new(section, other.to_string()),
    }
}

/// Named initial conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// `(1, 0, 1) | (0.125, 0, 0.1)` at the domain midpoint.
    Sod,
    /// Colliding streams `(1, 3, 1) | (1, -3, 1)`.
    DoubleShock,
    /// `ρ = 1 + 0.2 sin(2πx/L)`, `u = 1`, `P = 1`.
    SmoothWave,
    /// Entropy bump in a uniform pressure and velocity field.
    EntropyBump,
}

const PRESETS: [(&str, Preset); 4] = [
    ("sod", Preset::Sod),
    ("double_shock", Preset::DoubleShock),
    ("smooth_wave", Preset::SmoothWave),
    ("entropy_bump", Preset::EntropyBump),
];

impl Preset {
    pub fn name(self) -> &'static str {
        PRESETS
            .iter()
            .find(|(_, p)| *p == self)
            .map(|(n, _)| *n)
            .unwrap()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialCondition {
    Riemann {
        left: PrimitiveState,
        right: PrimitiveState,
        interface: f64,
    },
    Preset(Preset),
}

impl InitialCondition {
    fn from_section(sec: &Section) -> ConfigResult<Self> {
        let kind = sec.choice("type", &[("riemann", 0), ("preset", 1)])?;
        if kind == 0 {
            sec.reject_unknown(&["type", "left", "right", "interface"])?;
            let side = |k: &str| -> ConfigResult<PrimitiveState> {
                let s = sec.sub(k)?;
                s.reject_unknown(&["rho", "u", "p"])?;
                let (rho, u, p) = (s.float("rho")?, s.float("u")?, s.float("p")?);
                if !(rho > 0.0) {
                    return Err(ConfigError::new(s.key("rho"), "must be positive"));
                }
                Ok(PrimitiveState::new(rho, u, p))
            };
            Ok(InitialCondition::Riemann {
                left: side("left")?,
                right: side("right")?,
                interface: sec.float("interface")?,
            })
        } else {
            sec.reject_unknown(&["type", "name"])?;
            Ok(InitialCondition::Preset(sec.choice("name", &PRESETS)?))
        }
    }

    /// Primitive profile on `grid`; presets are laid out relative to the domain.
    pub fn profile(&self, grid: &Grid1D) -> impl Fn(f64) -> PrimitiveState + Send + Sync {
        let (a, b) = (grid.x_min, grid.x_max);
        let len = b - a;
        let mid = a + 0.5 * len;
        let ic = *self;
        move |x| match ic {
            InitialCondition::Riemann {
                left,
                right,
                interface,
            } => {
                if x < interface {
                    left
                } else {
                    right
                }
            }
            InitialCondition::Preset(Preset::Sod) => {
                if x < mid {
                    PrimitiveState::new(1.0, 0.0, 1.0)
                } else {
                    PrimitiveState::new(0.125, 0.0, 0.1)
                }
            }
            InitialCondition::Preset(Preset::DoubleShock) => {
                if x < mid {
                    PrimitiveState::new(1.0, 3.0, 1.0)
                } else {
                    PrimitiveState::new(1.0, -3.0, 1.0)
                }
            }
            InitialCondition::Preset(Preset::SmoothWave) => {
                PrimitiveState::new(1.0 + 0.2 * (2.0 * PI * (x - a) / len).sin(), 1.0, 1.0)
            }
            InitialCondition::Preset(Preset::EntropyBump) => {
                let r = (x - mid) / (0.1 * len);
                PrimitiveState::new(1.0 + 0.5 * (-r * r).exp(), 1.0, 1.0)
            }
        }
    }

    fn write_canonical(&self, out: &mut String) {
        out.push_str("[initial_condition]\n");
        match self {
            InitialCondition::Riemann {
                left,
                right,
                interface,
            } => {
                out.push_str("type = \"riemann\"\n");
                let _ = writeln!(out, "interface = {}", float(*interface));
                for (k, s) in [("left", left), ("right", right)] {
                    let _ = writeln!(
                        out,
                        "{k} = {{ rho = {}, u = {}, p = {} }}",
                        float(s.rho),
                        float(s.u),
                        float(s.p)
                    );
                }
            }
            InitialCondition::Preset(p) => {
                out.push_str("type = \"preset\"\n");
                let _ = writeln!(out, "name = \"{}\"", p.name());
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputConfig {
    pub directory: PathBuf,
    /// File name stem; defaults to the config file stem.
    pub stem: Option<String>,
    /// Sorted, within `[0, t_final]`.
    pub snapshot_times: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub eos: EosConfig,
    pub grid: Grid1D,
    pub solver: SolverConfig,
    pub initial_condition: InitialCondition,
    pub output: OutputConfig,
}

const BOUNDARIES: [(&str, Boundary); 3] = [
    ("transmissive", Boundary::Transmissive),
    ("periodic", Boundary::Periodic),
    ("reflective", Boundary::Reflective),
];
const ORDERS: [(&str, SchemeOrder); 2] = [
    ("first", SchemeOrder::First),
    ("second", SchemeOrder::Second),
];
const SLOPES: [(&str, SlopeLimiter); 2] = [
    ("minmod", SlopeLimiter::Minmod),
    ("none", SlopeLimiter::None),
];

fn name_of<T: PartialEq + Copy>(options: &[(&'static str, T)], v: T) -> &'static str {
    options
        .iter()
        .find(|(_, o)| *o == v)
        .map(|(n, _)| *n)
        .unwrap()
}

impl RunConfig {
    pub fn parse(text: &str) -> ConfigResult<Self> {
        Self::from_document(&Document::parse(text)?)
    }

    pub fn read(path: &Path) -> ConfigResult<Self> {
        Self::from_document(&Document::read(path)?)
    }

    pub fn from_document(doc: &Document) -> ConfigResult<Self> {
        let eos = EosConfig::from_document(doc)?;

        let sec = doc.section("grid")?;
        sec.reject_unknown(&["n_cells", "x_min", "x_max", "boundary"])?;
        let grid = Grid1D::new(
            sec.count("n_cells")?,
            sec.float_or("x_min", 0.0)?,
            sec.float_or("x_max", 1.0)?,
            if sec.table.contains_key("boundary") {
                sec.choice("boundary", &BOUNDARIES)?
            } else {
                Boundary::Transmissive
            },
        )
        .map_err(|e| param_error("grid", e))?;

        let sec = doc.section("solver")?;
        sec.reject_unknown(&[
            "cfl",
            "order",
            "slope_limiter",
            "t_final",
            "irp",
            "max_steps",
        ])?;
        let d = SolverConfig::default();
        let solver = SolverConfig {
            cfl: sec.float_or("cfl", d.cfl)?,
            order: if sec.table.contains_key("order") {
                sec.choice("order", &ORDERS)?
            } else {
                d.order
            },
            slope_limiter: if sec.table.contains_key("slope_limiter") {
                sec.choice("slope_limiter", &SLOPES)?
            } else {
                d.slope_limiter
            },
            t_final: sec.float("t_final")?,
            irp_enabled: if sec.table.contains_key("irp") {
                sec.boolean("irp")?
            } else {
                d.irp_enabled
            },
            max_steps: if sec.table.contains_key("max_steps") {
                sec.count("max_steps")?
            } else {
                d.max_steps
            },
        };
        solver.validate().map_err(|e| param_error("solver", e))?;

        let initial_condition = InitialCondition::from_section(&doc.section("initial_condition")?)?;

        let output = if doc.has("output") {
            let sec = doc.section("output")?;
            sec.reject_unknown(&["directory", "stem", "snapshot_times"])?;
            let times = match sec.table.get("snapshot_times") {
                None => vec![solver.t_final],
                Some(Value::Array(items)) => {
                    let key = sec.key("snapshot_times");
                    let mut times = Vec::with_capacity(items.len());
                    for item in items {
                        let t = match item {
                            Value::Float(x) => *x,
                            Value::Integer(i) => *i as f64,
                            _ => return Err(ConfigError::new(key, "expected an array of numbers")),
                        };
                        if !(0.0..=solver.t_final).contains(&t) {
                            return Err(ConfigError::new(
                                key,
                                format!("time {t} outside [0, t_final = {}]", solver.t_final),
                            ));
                        }
                        times.push(t);
                    }
                    times.sort_by(f64::total_cmp);
                    times.dedup();
                    times
                }
                Some(other) => {
                    return Err(ConfigError::new(
                        sec.key("snapshot_times"),
                        format!("expected an array, found {}", other.type_str()),
                    ))
                }
            };
            OutputConfig {
                directory: PathBuf::from(sec.opt_string("directory")?.unwrap_or(".")),
                stem: sec.opt_string("stem")?.map(str::to_string),
                snapshot_times: times,
            }
        } else {
            OutputConfig {
                directory: PathBuf::from("."),
                stem: None,
                snapshot_times: vec![solver.t_final],
            }
        };

        Ok(Self {
            eos,
            grid,
            solver,
            initial_condition,
            output,
        })
    }

    /// Canonical text: fixed section and key order, all defaults spelled out.
    pub fn to_canonical(&self) -> String {
        let mut out = String::new();
        self.eos.write_canonical(&mut out);

        let g = &self.grid;
        out.push_str("\n[grid]\n");
        let _ = writeln!(out, "n_cells = {}", g.n_cells);
        let _ = writeln!(out, "x_min = {}", float(g.x_min));
        let _ = writeln!(out, "x_max = {}", float(g.x_max));
        let _ = writeln!(out, "boundary = \"{}\"", name_of(&BOUNDARIES, g.boundary));

        let s = &self.solver;
        out.push_str("\n[solver]\n");
        let _ = writeln!(out, "cfl = {}", float(s.cfl));
        let _ = writeln!(out, "order = \"{}\"", name_of(&ORDERS, s.order));
        let _ = writeln!(
            out,
            "slope_limiter = \"{}\"",
            name_of(&SLOPES, s.slope_limiter)
        );
        let _ = writeln!(out, "t_final = {}", float(s.t_final));
        let _ = writeln!(out, "irp = {}", s.irp_enabled);
        let _ = writeln!(out, "max_steps = {}", s.max_steps);

        out.push('\n');
        self.initial_condition.write_canonical(&mut out);

        let o = &self.output;
        out.push_str("\n[output]\n");
        let _ = writeln!(
            out,
            "directory = {}",
            Value::from(o.directory.to_string_lossy().as_ref())
        );
        if let Some(stem) = &o.stem {
            let _ = writeln!(out, "stem = {}", Value::from(stem.as_str()));
        }
        let times: Vec<_> = o.snapshot_times.iter().map(|t| float(*t)).collect();
        let _ = writeln!(out, "snapshot_times = [{}]", times.join(", "));
        out
    }

    /// Output stem, falling back to the config file stem and then `run`.
    pub fn stem(&self, config_path: Option<&Path>) -> String {
        match (&self.output.stem, config_path) {
            (Some(s), _) => s.clone(),
            (None, Some(p)) => Self::parse_stem(p),
            (None, None) => "run".to_string(),
        }
    }

    /// File stem of a config path, or `run`.
    pub fn parse_stem(config_path: &Path) -> String {
        config_path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "run".to_string())
    }
}

/// Shortest round-trip float text that TOML reads back as a float.
fn float(x: f64) -> String {
    let s = format!("{x:?}");
    if s.contains(['.', 'e', 'E']) {
        s
    } else {
        format!("{s}.0")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SOD: &str = r#"
[eos]
model = "polytropic"
gamma0 = 1.4

[grid]
n_cells = 400

[solver]
t_final = 0.2

[initial_condition]
type = "riemann"
interface = 0.5
left = { rho = 1, u = 0, p = 1 }
right = { rho = 0.125, u = 0.0, p = 0.1 }
"#;

    fn err(text: &str) -> ConfigError {
        RunConfig::parse(text).unwrap_err()
    }

    #[test]
    fn parses_with_defaults() {
        let c = RunConfig::parse(SOD).unwrap();
        assert_eq!(
            c.eos,
            EosConfig::Polytropic {
                gamma0: 1.4,
                k: 1.0
            }
        );
        assert_eq!(c.grid.n_cells, 400);
        assert_eq!(c.grid.boundary, Boundary::Transmissive);
        assert_eq!(c.solver.cfl, 0.4);
        assert_eq!(c.output.snapshot_times, vec![0.2]);
        assert_eq!(c.stem(Some(Path::new("cases/sod.cfg"))), "sod");
    }

    #[test]
    fn canonical_form_is_a_fixed_point() {
        let c = RunConfig::parse(SOD).unwrap();
        let once = c.to_canonical();
        let again = RunConfig::parse(&once).unwrap();
        assert_eq!(again, c);
        assert_eq!(again.to_canonical(), once);
    }

    #[test]
    fn missing_key_is_named() {
        let e = err(&SOD.replace("n_cells = 400", ""));
        assert_eq!(e.key, "grid.n_cells");
        assert_eq!(e.message, "missing required key");
        let e = err(&SOD.replace(
            "right = { rho = 0.125, u = 0.0, p = 0.1 }",
            "right = { rho = 0.125, u = 0.0 }",
        ));
        assert_eq!(e.key, "initial_condition.right.p");
    }

    #[test]
    fn unknown_keys_and_sections_rejected() {
        assert_eq!(
            err(&SOD.replace("gamma0 = 1.4", "gamma0 = 1.4\ngama = 2")).key,
            "eos.gama"
        );
        assert_eq!(err(&format!("{SOD}\n[extra]\na = 1\n")).key, "extra");
    }

    #[test]
    fn invalid_values_are_named() {
        assert_eq!(
            err(&SOD.replace("gamma0 = 1.4", "gamma0 = 0.9")).key,
            "eos.gamma0"
        );
        assert_eq!(
            err(&SOD.replace("t_final = 0.2", "t_final = -1")).key,
            "solver.t_final"
        );
        assert_eq!(
            err(&SOD.replace("n_cells = 400", "n_cells = 0")).key,
            "grid.n_cells"
        );
        assert_eq!(
            err(&SOD.replace("n_cells = 400", "n_cells = \"many\"")).key,
            "grid.n_cells"
        );
        let e = err(&SOD.replace("t_final = 0.2", "t_final = 0.2\norder = \"third\""));
        assert_eq!(e.key, "solver.order");
        let e = err(&format!("{SOD}\n[output]\nsnapshot_times = [0.5]\n"));
        assert_eq!(e.key, "output.snapshot_times");
    }

    #[test]
    fn tait_section() {
        let text = SOD.replace(
            "model = \"polytropic\"\ngamma0 = 1.4",
            "model = \"tait\"\nk_r = 10\nv_r = 1\np_r = 1\ns_r = 0\ne_r = 2\ntheta_r = 1\nnu = 2\nc = 1\nd = 0.5",
        );
        let c = RunConfig::parse(&text).unwrap();
        assert_eq!(c.eos, EosConfig::Tait(TaitParams::illustrative(2.0)));
        let e = err(&text.replace("c = 1\n", "c = -1\n"));
        assert_eq!(e.key, "eos.c");
        let e = err(&text.replace("d = 0.5", ""));
        assert_eq!(e.key, "eos.d");
    }

    #[test]
    fn presets() {
        let text = SOD.replace(
            "type = \"riemann\"\ninterface = 0.5\nleft = { rho = 1, u = 0, p = 1 }\nright = { rho = 0.125, u = 0.0, p = 0.1 }",
            "type = \"preset\"\nname = \"smooth_wave\"",
        );
        let c = RunConfig::parse(&text).unwrap();
        assert_eq!(
            c.initial_condition,
            InitialCondition::Preset(Preset::SmoothWave)
        );
        let f = c.initial_condition.profile(&c.grid);
        assert!((f(0.25).rho - 1.2).abs() < 1e-15);
        let c2 = RunConfig::parse(&c.to_canonical()).unwrap();
        assert_eq!(c2, c);
        assert_eq!(
            err(&text.replace("smooth_wave", "blast")).key,
            "initial_condition.name"
        );
    }

    #[test]
    fn float_text_round_trips() {
        for x in [1.0, 0.1, 1e-20, 3e300, -0.0, 2.0 / 3.0] {
            let v: Table = format!("x = {}", float(x)).parse().unwrap();
            assert_eq!(v["x"].as_float(), Some(x));
        }
    }
}
