use thiserror::Error;

/// Constraint of the invariant region, in the order they are checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Constraint {
    Density,
    InternalEnergy,
    Entropy,
}

impl Constraint {
    pub const ALL: [Constraint; 3] = [
        Constraint::Density,
        Constraint::InternalEnergy,
        Constraint::Entropy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Constraint::Density => "rho",
            Constraint::InternalEnergy => "R",
            Constraint::Entropy => "q",
        }
    }
}

impl std::fmt::Display for Constraint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("state outside admissible domain: {0}")]
    Domain(String),

    #[error("nonphysical state: {0}")]
    NonphysicalState(String),

    #[error("nonhyperbolic state: F_vv = {f_vv:e}")]
    NonhyperbolicState { f_vv: f64 },

    #[error("division by zero evaluating {0}")]
    DivisionByZero(&'static str),

    #[error("entropy inversion failed for e = {e:e}, v = {v:e} after {iterations} iterations")]
    InversionFailure { e: f64, v: f64, iterations: usize },

    #[error("no physical root for e = {e:e}, v = {v:e}")]
    NoPhysicalRoot { e: f64, v: f64 },

    #[error("cell average violates constraint {constraint} (U = {value:e})")]
    AverageOutsideRegion { constraint: Constraint, value: f64 },

    #[error("inadmissible initial data at x = {x}: {reason}")]
    InadmissibleInitialData { x: f64, reason: String },

    #[error("step {step} failed after {rejections} rejected attempts at t = {time}")]
    StepFailure {
        step: usize,
        time: f64,
        rejections: usize,
    },

    #[error("reached max_steps = {max_steps} at t = {time} before t_final = {t_final}")]
    MaxStepsExceeded {
        max_steps: usize,
        time: f64,
        t_final: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
