//! Matrix algebra over the action-set semiring and over the reals.

mod actions;
mod real;

pub use actions::{ActionAlphabet, ActionMatrix, ActionSet, MatrixDisplay, MAX_ACTIONS, TAU};
pub use real::{solve_linear, RealMatrix, PIVOT_THRESHOLD};

/// Absolute tolerance for real-valued equalities.
pub const DEFAULT_ATOL: f64 = 1e-9;
