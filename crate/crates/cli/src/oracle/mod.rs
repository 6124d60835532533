//! Verification oracles. None of them uses the solver or the invariant
//! region code, so they can check both independently.

pub mod fd_hessian;
pub mod q_increment;
pub mod riemann;

pub use fd_hessian::{fd_hessian, leading_minors, min_eigenvalue, FdError};
pub use q_increment::{IncrementError, QIncrement};
pub use riemann::{ExactRiemann, Primitive, RiemannError};
