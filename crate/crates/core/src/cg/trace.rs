use serde::{Deserialize, Serialize};

use super::{Breakdown, SolverConfig};

/// Iterate at the start of iteration `k`, before the stepsize is chosen.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationState {
    pub k: usize,
    pub x: Vec<f64>,
    pub g: Vec<f64>,
    pub d: Vec<f64>,
    /// Absent at `k = 0`.
    pub beta: Option<f64>,
}

/// One completed iteration with its cached `Ad_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub k: usize,
    pub x: Vec<f64>,
    pub g: Vec<f64>,
    pub d: Vec<f64>,
    pub beta: Option<f64>,
    pub alpha: f64,
    pub ad: Vec<f64>,
}

/// Iterate at which the run stopped. No step was taken from it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TerminalState {
    pub k: usize,
    pub x: Vec<f64>,
    pub g: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TerminationReason {
    GradientBelowTolerance,
    IterationCap,
    Breakdown,
}

/// Record of a solve. When recording is on, `records[k].k == k` for every
/// completed iteration and `terminal.k == records.len()`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationTrace {
    pub records: Vec<IterationRecord>,
    pub terminal: TerminalState,
    pub reason: TerminationReason,
    pub breakdown: Option<Breakdown>,
    pub config: SolverConfig,
    pub initial_gradient_norm: f64,
    /// Absolute threshold actually applied to `‖g_k‖`.
    pub gradient_tolerance: f64,
    pub iteration_cap: usize,
}

impl IterationTrace {
    pub fn terminated_at(&self) -> usize {
        self.terminal.k
    }

    pub fn is_complete(&self) -> bool {
        self.records.len() == self.terminal.k && self.records.iter().enumerate().all(|(i, r)| r.k == i)
    }

    /// `g_0, …, g_K` including the terminal gradient.
    pub fn gradients(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.records
            .iter()
            .map(|r| r.g.as_slice())
            .chain(std::iter::once(self.terminal.g.as_slice()))
    }

    /// `x_0, …, x_K`
    pub fn iterates(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.records
            .iter()
            .map(|r| r.x.as_slice())
            .chain(std::iter::once(self.terminal.x.as_slice()))
    }
}
