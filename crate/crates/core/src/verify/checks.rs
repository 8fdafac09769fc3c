use super::report::{CheckKind, CheckReport, IdentityId, IdentityResidual, Index, TolerancePolicy, VerificationReport};
use crate::cg::{
    beta, stepsize_exact, stepsize_orthogonal, BetaRule, IterationTrace, QuadraticProblem, TerminationReason,
};
use crate::error::{Error, Result};
use crate::linalg::{dot_unchecked, norm, Cholesky, SymMatrix};
use crate::par::{self, Execution};

/// Runs checks under a fixed tolerance policy.
#[derive(Debug, Clone, Default)]
pub struct Verifier {
    pub policy: TolerancePolicy,
    pub exec: Execution,
}

enum Outcome {
    Value(f64),
    /// Raw residual nonzero but a participating gradient is numerically zero.
    Skip,
}

/// `raw/scale`, with exactly-zero residuals reported as 0.
fn normalize(raw: f64, scale: f64, degenerate: bool) -> Outcome {
    if raw == 0.0 {
        Outcome::Value(0.0)
    } else if degenerate || !(scale.is_finite() && scale > 0.0) {
        Outcome::Skip
    } else {
        Outcome::Value(raw / scale)
    }
}

#[derive(Default)]
struct Collector {
    residuals: Vec<IdentityResidual>,
    skipped: usize,
}

impl Collector {
    fn push(&mut self, id: IdentityId, index: Index, raw: f64, scale: f64, degenerate: bool, tol: f64) {
        match normalize(raw, scale, degenerate) {
            Outcome::Value(v) => self.residuals.push(IdentityResidual::new(id, index, raw, v, tol)),
            Outcome::Skip => self.skipped += 1,
        }
    }

    fn extend(&mut self, other: Collector) {
        self.residuals.extend(other.residuals);
        self.skipped += other.skipped;
    }
}

fn require_complete(trace: &IterationTrace) -> Result<()> {
    if !trace.is_complete() {
        return Err(Error::IncompleteTrace(format!(
            "{} records for termination at iteration {}; solve with record_trace enabled",
            trace.records.len(),
            trace.terminated_at()
        )));
    }
    Ok(())
}

fn require_order(trace: &IterationTrace, a: &SymMatrix) -> Result<()> {
    let n = trace.terminal.g.len();
    if n != a.order() {
        return Err(Error::DimensionMismatch {
            expected: a.order(),
            found: n,
        });
    }
    Ok(())
}

impl Verifier {
    pub fn new(policy: TolerancePolicy) -> Self {
        Self {
            policy,
            exec: Execution::Auto,
        }
    }

    pub fn with_execution(mut self, exec: Execution) -> Self {
        self.exec = exec;
        self
    }

    fn zero_threshold(&self, trace: &IterationTrace) -> f64 {
        self.policy.zero_gradient_ratio * trace.initial_gradient_norm
    }

    /// `g_iᵀd_i = −‖g_i‖²`, `d_iᵀAd_j = 0`, `g_iᵀd_j = 0`, `g_iᵀg_j = 0` for
    /// `j < i`, using the cached `Ad_j`.
    pub fn classical(&self, trace: &IterationTrace, a: &SymMatrix) -> Result<VerificationReport> {
        require_complete(trace)?;
        require_order(trace, a)?;
        let tol = self.policy.tolerances;
        let zero = self.zero_threshold(trace);
        let records = &trace.records;
        let k_final = records.len();
        let grads: Vec<&[f64]> = trace.gradients().collect();
        let g_norms: Vec<f64> = grads.iter().map(|g| norm(g)).collect();
        let d_norms: Vec<f64> = records.iter().map(|r| norm(&r.d)).collect();
        let d_anorms: Vec<f64> = records.iter().map(|r| dot_unchecked(&r.d, &r.ad).sqrt()).collect();

        // pairs range over recorded iterations only; the terminal gradient
        // enters through the gradient-conjugacy check instead
        let rows = par::map_range(self.exec, k_final, |i| {
            let mut c = Collector::default();
            let gi = grads[i];
            let gi_zero = g_norms[i] <= zero;
            let raw = dot_unchecked(gi, &records[i].d) + g_norms[i] * g_norms[i];
            c.push(
                IdentityId::Descent,
                Index::Single(i),
                raw,
                g_norms[i] * g_norms[i],
                gi_zero,
                tol.descent,
            );
            for j in 0..i {
                let raw = dot_unchecked(&records[i].d, &records[j].ad);
                c.push(
                    IdentityId::DirectionConjugacy,
                    Index::Pair(i, j),
                    raw,
                    d_anorms[i] * d_anorms[j],
                    false,
                    tol.identity,
                );
                let raw = dot_unchecked(gi, &records[j].d);
                c.push(
                    IdentityId::GradientDirectionOrthogonality,
                    Index::Pair(i, j),
                    raw,
                    g_norms[i] * d_norms[j],
                    gi_zero,
                    tol.identity,
                );
                let raw = dot_unchecked(gi, grads[j]);
                c.push(
                    IdentityId::GradientOrthogonality,
                    Index::Pair(i, j),
                    raw,
                    g_norms[i] * g_norms[j],
                    gi_zero || g_norms[j] <= zero,
                    tol.identity,
                );
            }
            c
        });
        let mut all = Collector::default();
        rows.into_iter().for_each(|c| all.extend(c));
        let check = CheckReport::build(
            CheckKind::ClassicalIdentities,
            all.residuals,
            all.skipped,
            vec![],
            vec![],
        );
        Ok(VerificationReport::single(check, &self.policy))
    }

    /// `g_{k+1}ᵀAg_k = −‖g_{k+1}‖²/α_k` and `g_{k+1}ᵀAg_i = 0` for
    /// `i ≤ k−1`, normalized by `A`-norms. One matvec per gradient; the pair
    /// loop is quadratic in the trace length.
    pub fn gradient_conjugacy(&self, trace: &IterationTrace, a: &SymMatrix) -> Result<VerificationReport> {
        require_complete(trace)?;
        require_order(trace, a)?;
        if trace.records.is_empty() {
            return Err(Error::IncompleteTrace(
                "gradient conjugacy needs at least two gradients".into(),
            ));
        }
        let tol = self.policy.tolerances.identity;
        let zero = self.zero_threshold(trace);
        let grads: Vec<&[f64]> = trace.gradients().collect();
        let g_norms: Vec<f64> = grads.iter().map(|g| norm(g)).collect();
        let inner = if self.exec.is_parallel(grads.len()) {
            Execution::Sequential
        } else {
            self.exec
        };
        let ag: Vec<Vec<f64>> = par::map(self.exec, &grads, |g| a.matvec_with(g, inner).expect("order checked"));
        let a_norms: Vec<f64> = grads
            .iter()
            .zip(&ag)
            .map(|(g, ag)| dot_unchecked(g, ag).sqrt())
            .collect();

        let rows = par::map_range(self.exec, trace.records.len(), |k| {
            let mut c = Collector::default();
            let next = grads[k + 1];
            let next_zero = g_norms[k + 1] <= zero;
            let alpha = trace.records[k].alpha;
            let raw = dot_unchecked(next, &ag[k]) + g_norms[k + 1] * g_norms[k + 1] / alpha;
            c.push(
                IdentityId::AdjacentGradientConjugacy,
                Index::Pair(k + 1, k),
                raw,
                a_norms[k + 1] * a_norms[k],
                next_zero,
                tol,
            );
            for i in 0..k {
                let raw = dot_unchecked(next, &ag[i]);
                c.push(
                    IdentityId::FarGradientConjugacy,
                    Index::Pair(k + 1, i),
                    raw,
                    a_norms[k + 1] * a_norms[i],
                    next_zero || g_norms[i] <= zero,
                    tol,
                );
            }
            c
        });
        let mut all = Collector::default();
        rows.into_iter().for_each(|c| all.extend(c));
        let check = CheckReport::build(CheckKind::GradientConjugacy, all.residuals, all.skipped, vec![], vec![]);
        Ok(VerificationReport::single(check, &self.policy))
    }

    /// Recomputes both stepsize formulas from each record and reports
    /// `|α_exact − α_orth| / α_exact`.
    pub fn stepsize_equivalence(&self, trace: &IterationTrace) -> Result<VerificationReport> {
        require_complete(trace)?;
        let tol = self.policy.tolerances.stepsize;
        let mut residuals = Vec::new();
        let mut failures = Vec::new();
        for r in &trace.records {
            let exact = stepsize_exact(&r.g, &r.d, &r.ad);
            let orth = stepsize_orthogonal(&r.g, &r.ad);
            match (exact, orth) {
                (Ok(e), Ok(o)) => {
                    let raw = e - o;
                    let normalized = if raw == 0.0 { 0.0 } else { raw / e };
                    if normalized.is_finite() {
                        residuals.push(IdentityResidual::new(
                            IdentityId::StepsizeEquivalence,
                            Index::Single(r.k),
                            raw,
                            normalized,
                            tol,
                        ));
                    } else {
                        failures.push(format!("iteration {}: non-finite discrepancy", r.k));
                    }
                }
                (e, o) => {
                    for err in [e.err(), o.err()].into_iter().flatten() {
                        failures.push(format!("iteration {}: {err}", r.k));
                    }
                }
            }
        }
        let check = CheckReport::build(CheckKind::StepsizeEquivalence, residuals, 0, failures, vec![]);
        Ok(VerificationReport::single(check, &self.policy))
    }

    /// Termination within `n` iterations by the gradient test, and agreement
    /// of the final iterate with a dense Cholesky solve of `Ax = −b`.
    pub fn finite_termination(&self, trace: &IterationTrace, problem: &QuadraticProblem) -> Result<VerificationReport> {
        require_order(trace, problem.matrix())?;
        let n = problem.dim();
        let k = trace.terminated_at();
        let mut residuals = vec![IdentityResidual::new(
            IdentityId::TerminationIndex,
            Index::Single(k),
            k as f64,
            k as f64 / n as f64,
            1.0,
        )];
        let mut failures = Vec::new();
        if trace.reason != TerminationReason::GradientBelowTolerance {
            failures.push(format!("terminated by {:?} at iteration {k}", trace.reason));
        }
        let a = problem.matrix();
        let rhs: Vec<f64> = problem.rhs().iter().map(|v| -v).collect();
        match Cholesky::factor(n, &a.to_dense()).and_then(|c| c.solve(&rhs)) {
            Ok(x_star) => {
                let err: Vec<f64> = trace.terminal.x.iter().zip(&x_star).map(|(u, v)| u - v).collect();
                let raw = norm(&err);
                let scale = norm(&x_star);
                let normalized = if scale > 0.0 { raw / scale } else { raw };
                residuals.push(IdentityResidual::new(
                    IdentityId::SolutionAccuracy,
                    Index::Single(k),
                    raw,
                    normalized,
                    self.policy.tolerances.solution,
                ));
            }
            Err(e) => failures.push(format!("direct solve failed: {e}")),
        }
        let check = CheckReport::build(CheckKind::FiniteTermination, residuals, 0, failures, vec![]);
        Ok(VerificationReport::single(check, &self.policy))
    }

    /// Recomputes FR, HS, PRP and DY at every `k ≥ 1` and reports the
    /// largest pairwise relative spread.
    pub fn beta_agreement(&self, trace: &IterationTrace) -> Result<VerificationReport> {
        require_complete(trace)?;
        let tol = self.policy.tolerances.beta;
        let zero = self.zero_threshold(trace);
        let mut residuals = Vec::new();
        let mut failures = Vec::new();
        let mut skipped = 0;
        for pair in trace.records.windows(2) {
            let (prev, cur) = (&pair[0], &pair[1]);
            if norm(&cur.g) <= zero {
                skipped += 1;
                continue;
            }
            let mut values = Vec::with_capacity(4);
            for rule in BetaRule::ALL {
                match beta(rule, &cur.g, &prev.g, &prev.d) {
                    Ok(b) => values.push(b),
                    Err(e) => failures.push(format!("iteration {} {}: {e}", cur.k, rule.short_name())),
                }
            }
            let mut raw = 0.0_f64;
            let mut spread = 0.0_f64;
            for (i, a) in values.iter().enumerate() {
                for b in &values[i + 1..] {
                    let diff = (a - b).abs();
                    let scale = a.abs().max(b.abs());
                    if diff > 0.0 {
                        raw = raw.max(diff);
                        spread = spread.max(diff / scale);
                    }
                }
            }
            residuals.push(IdentityResidual::new(
                IdentityId::BetaSpread,
                Index::Single(cur.k),
                raw,
                spread,
                tol,
            ));
        }
        let check = CheckReport::build(CheckKind::BetaAgreement, residuals, skipped, failures, vec![]);
        Ok(VerificationReport::single(check, &self.policy))
    }

    /// All five checks. A run with fewer than two gradients gets an empty
    /// gradient-conjugacy check with a note instead of an error.
    pub fn all(&self, trace: &IterationTrace, problem: &QuadraticProblem) -> Result<VerificationReport> {
        let a = problem.matrix().as_sym();
        let conjugacy = if trace.records.is_empty() {
            require_complete(trace)?;
            VerificationReport::single(
                CheckReport::build(
                    CheckKind::GradientConjugacy,
                    vec![],
                    0,
                    vec![],
                    vec!["fewer than two gradients recorded".into()],
                ),
                &self.policy,
            )
        } else {
            self.gradient_conjugacy(trace, a)?
        };
        Ok(VerificationReport::merge([
            self.classical(trace, a)?,
            conjugacy,
            self.stepsize_equivalence(trace)?,
            self.finite_termination(trace, problem)?,
            self.beta_agreement(trace)?,
        ]))
    }
}

pub fn check_classical_identities(
    trace: &IterationTrace,
    a: &SymMatrix,
    policy: &TolerancePolicy,
) -> Result<VerificationReport> {
    Verifier::new(policy.clone()).classical(trace, a)
}

pub fn check_gradient_conjugacy(
    trace: &IterationTrace,
    a: &SymMatrix,
    policy: &TolerancePolicy,
) -> Result<VerificationReport> {
    Verifier::new(policy.clone()).gradient_conjugacy(trace, a)
}

pub fn check_stepsize_equivalence(trace: &IterationTrace, policy: &TolerancePolicy) -> Result<VerificationReport> {
    Verifier::new(policy.clone()).stepsize_equivalence(trace)
}

pub fn check_finite_termination(
    trace: &IterationTrace,
    problem: &QuadraticProblem,
    policy: &TolerancePolicy,
) -> Result<VerificationReport> {
    Verifier::new(policy.clone()).finite_termination(trace, problem)
}

pub fn check_beta_agreement(trace: &IterationTrace, policy: &TolerancePolicy) -> Result<VerificationReport> {
    Verifier::new(policy.clone()).beta_agreement(trace)
}

/// Estimates the condition number, picks the tolerance schedule and runs
/// every check.
pub fn verify_trace(trace: &IterationTrace, problem: &QuadraticProblem) -> Result<VerificationReport> {
    Verifier::new(TolerancePolicy::for_problem(problem)?).all(trace, problem)
}
