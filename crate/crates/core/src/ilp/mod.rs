//! Exact integer-linear feasibility: models and a branch-and-bound solver.
//!
//! No floating point is involved anywhere. Strict inequalities are not
//! representable; callers shift `x < b` to `x <= b - 1`.

mod model;
mod solver;

pub use model::{Assignment, Comparator, IlpModel, LinearConstraint, VarDecl, VarId, Violation};
pub use solver::{solve, solve_with_stats, Outcome, SolveStats};
