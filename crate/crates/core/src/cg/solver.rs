use super::rules::{beta_at, stepsize_exact_at, stepsize_orthogonal_at};
use super::{
    direction, Breakdown, GradientUpdate, IterationRecord, IterationState, IterationTrace, QuadraticProblem,
    SolverConfig, StepsizeRule, TerminalState, TerminationReason,
};
use crate::error::{Error, Result};
use crate::linalg::{check_len, norm};

#[derive(Debug, Clone)]
pub struct SolveOutput {
    pub x: Vec<f64>,
    pub trace: IterationTrace,
}

/// Iteration 0 from `x0`: `g_0 = Ax_0 + b`, `d_0 = −g_0`.
pub fn start(problem: &QuadraticProblem, x0: &[f64]) -> Result<IterationState> {
    let g = problem.gradient(x0)?;
    let d = direction(&g, 0.0, None)?;
    Ok(IterationState {
        k: 0,
        x: x0.to_vec(),
        g,
        d,
        beta: None,
    })
}

/// Takes iteration `k`: stepsize, `x_{k+1}`, `g_{k+1}`, then `β_{k+1}` and
/// `d_{k+1}`. Returns the completed record for `k` and the state for `k+1`.
///
/// The caller must stop before a zero gradient; `g_k = 0` is rejected.
pub fn step(
    problem: &QuadraticProblem,
    state: IterationState,
    config: &SolverConfig,
) -> Result<(IterationRecord, IterationState)> {
    let (record, x, g) = advance(problem, &state, config)?;
    let next = extend(record.k + 1, x, g, &record, config)?;
    Ok((record, next))
}

fn advance(
    problem: &QuadraticProblem,
    state: &IterationState,
    config: &SolverConfig,
) -> Result<(IterationRecord, Vec<f64>, Vec<f64>)> {
    let n = problem.dim();
    check_len(n, state.x.len())?;
    check_len(n, state.g.len())?;
    check_len(n, state.d.len())?;
    if state.g.iter().all(|&v| v == 0.0) {
        return Err(Error::Precondition(format!(
            "gradient at iteration {} is zero; the run should have terminated",
            state.k
        )));
    }
    let IterationState { k, x, g, d, beta } = state.clone();
    let ad = problem.matrix().matvec(&d)?;
    let alpha = match config.stepsize {
        StepsizeRule::ExactLineSearch => stepsize_exact_at(&g, &d, &ad, k)?,
        StepsizeRule::GradientOrthogonality => stepsize_orthogonal_at(&g, &ad, k)?,
    };
    let x_next: Vec<f64> = x.iter().zip(&d).map(|(xi, di)| xi + alpha * di).collect();
    let g_next = match config.gradient_update {
        GradientUpdate::Recurrence => g.iter().zip(&ad).map(|(gi, adi)| gi + alpha * adi).collect(),
        GradientUpdate::Explicit => problem.gradient(&x_next)?,
    };
    let record = IterationRecord {
        k,
        x,
        g,
        d,
        beta,
        alpha,
        ad,
    };
    Ok((record, x_next, g_next))
}

fn extend(k: usize, x: Vec<f64>, g: Vec<f64>, prev: &IterationRecord, config: &SolverConfig) -> Result<IterationState> {
    let beta = beta_at(config.beta, &g, &prev.g, &prev.d, k)?;
    let d = direction(&g, beta, Some(&prev.d))?;
    Ok(IterationState {
        k,
        x,
        g,
        d,
        beta: Some(beta),
    })
}

/// Runs until `‖g_k‖` drops to the tolerance, the iteration cap is reached,
/// or a formula breaks down. Breakdown is reported in the trace, not as an
/// error.
pub fn solve(problem: &QuadraticProblem, x0: &[f64], config: &SolverConfig) -> Result<SolveOutput> {
    config.validate()?;
    let n = problem.dim();
    check_len(n, x0.len())?;
    let cap = config.max_iterations.unwrap_or(n);

    let mut state = start(problem, x0)?;
    let g0_norm = norm(&state.g);
    let tol = config.tolerance.resolve(g0_norm);
    let mut records = Vec::new();
    let mut breakdown: Option<Breakdown> = None;

    let reason = loop {
        if norm(&state.g) <= tol {
            break TerminationReason::GradientBelowTolerance;
        }
        if state.k >= cap {
            break TerminationReason::IterationCap;
        }
        let (record, x, g) = match advance(problem, &state, config) {
            Ok(v) => v,
            Err(Error::Breakdown(b)) => {
                breakdown = Some(b);
                break TerminationReason::Breakdown;
            }
            Err(e) => return Err(e),
        };
        let k = record.k + 1;
        // β is not needed once the run is over
        let beta = if norm(&g) <= tol {
            None
        } else {
            match beta_at(config.beta, &g, &record.g, &record.d, k) {
                Ok(b) => Some(b),
                Err(Error::Breakdown(b)) => {
                    breakdown = Some(b);
                    None
                }
                Err(e) => return Err(e),
            }
        };
        let d = match beta {
            Some(b) => direction(&g, b, Some(&record.d))?,
            None => Vec::new(),
        };
        if config.record_trace {
            records.push(record);
        }
        state = IterationState { k, x, g, d, beta };
        if breakdown.is_some() {
            break TerminationReason::Breakdown;
        }
    };

    let terminal = TerminalState {
        k: state.k,
        x: state.x,
        g: state.g,
    };
    Ok(SolveOutput {
        x: terminal.x.clone(),
        trace: IterationTrace {
            records,
            terminal,
            reason,
            breakdown,
            config: *config,
            initial_gradient_norm: g0_norm,
            gradient_tolerance: tol,
            iteration_cap: cap,
        },
    })
}
