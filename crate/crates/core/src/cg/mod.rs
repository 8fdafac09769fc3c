//! The linear conjugate gradient iteration.
//!
//! `x_{k+1} = x_k + α_k d_k` with `d_0 = −g_0`, `d_k = −g_k + β_k d_{k−1}`.
//! The stepsize is either the exact line-search minimizer along `d_k` or the
//! value that makes `g_{k+1}` orthogonal to `g_k`; on a quadratic with SPD
//! Hessian both give the same number.

mod config;
mod problem;
mod rules;
mod solver;
mod trace;

pub use config::{BetaRule, GradientUpdate, SolverConfig, StepsizeRule, Tolerance};
pub use problem::QuadraticProblem;
pub use rules::{beta, direction, stepsize_exact, stepsize_orthogonal, Breakdown, BreakdownSite, DENOMINATOR_FLOOR};
pub use solver::{solve, start, step, SolveOutput};
pub use trace::{IterationRecord, IterationState, IterationTrace, TerminalState, TerminationReason};
