//! Front end for `irp-core`: run configuration files, CSV output, and the
//! verification oracles (exact polytropic Riemann solver and a
//! finite-difference Hessian).

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod checks;
pub mod commands;
pub mod config;
pub mod oracle;
pub mod output;
pub mod sampling;

pub use commands::{CliError, CliResult};
pub use config::{ConfigError, RunConfig};
