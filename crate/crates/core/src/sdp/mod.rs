//! Conic programs with one PSD block and one nonnegative block, and the
//! vector-coloring programs built on top of them.

mod problem;
mod solver;
mod vc;

pub use problem::{ConicProblem, LinearFunctional};
pub use solver::{solve, ConicSolution, FailureKind, SolveFailure};
pub use vc::{svc_primal_problem, vc_dual_extract, vc_primal_problem};
