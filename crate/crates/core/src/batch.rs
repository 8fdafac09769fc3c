//! Solving and verifying many independent problems.
//!
//! Each problem is solved single-threaded; parallelism is across problems.
//! Results come back in input order regardless of [`Execution`].

use crate::cg::{solve, QuadraticProblem, SolveOutput, SolverConfig};
use crate::error::Result;
use crate::io::{builtin_problem, BuiltinFamily, BuiltinProblemSpec, RhsMode};
use crate::linalg::{Distribution, SpectrumSpec};
use crate::par::{self, Execution};
use crate::verify::{TolerancePolicy, VerificationReport, Verifier};

/// Seeded family of random SPD problems with condition numbers spread
/// log-uniformly over `[min_condition, max_condition]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomEnsemble {
    pub count: usize,
    /// Member `i` has order `orders[i % orders.len()]`.
    pub orders: Vec<usize>,
    pub min_condition: f64,
    pub max_condition: f64,
    pub distribution: Distribution,
    pub base_seed: u64,
}

impl RandomEnsemble {
    pub fn condition(&self, i: usize) -> f64 {
        if self.count <= 1 {
            return self.max_condition;
        }
        let t = i as f64 / (self.count - 1) as f64;
        self.min_condition * (self.max_condition / self.min_condition).powf(t)
    }

    pub fn member(&self, i: usize) -> BuiltinProblemSpec {
        let seed = self.base_seed.wrapping_add(i as u64);
        BuiltinProblemSpec::new(
            BuiltinFamily::RandomSpd {
                spectrum: SpectrumSpec::Range {
                    min: 1.0,
                    max: self.condition(i),
                    distribution: self.distribution,
                },
                seed,
            },
            self.orders[i % self.orders.len()],
            RhsMode::Random {
                seed: seed ^ 0x9e37_79b9_7f4a_7c15,
            },
        )
    }

    pub fn build(&self, exec: Execution) -> Result<Vec<QuadraticProblem>> {
        let specs: Vec<_> = (0..self.count).map(|i| self.member(i)).collect();
        par::map(exec, &specs, builtin_problem).into_iter().collect()
    }
}

/// Solves every problem from the zero vector.
pub fn solve_batch(problems: &[QuadraticProblem], config: &SolverConfig, exec: Execution) -> Result<Vec<SolveOutput>> {
    par::map(exec, problems, |p| solve(p, &vec![0.0; p.dim()], config))
        .into_iter()
        .collect()
}

/// Solves with trace recording and runs all checks, picking each problem's
/// tolerance schedule from its condition estimate.
pub fn verify_batch(
    problems: &[QuadraticProblem],
    config: &SolverConfig,
    exec: Execution,
) -> Result<Vec<(SolveOutput, VerificationReport)>> {
    let config = SolverConfig {
        record_trace: true,
        ..*config
    };
    par::map(exec, problems, |p| {
        let out = solve(p, &vec![0.0; p.dim()], &config)?;
        let verifier = Verifier::new(TolerancePolicy::for_problem(p)?).with_execution(Execution::Sequential);
        let report = verifier.all(&out.trace, p)?;
        Ok((out, report))
    })
    .into_iter()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> RandomEnsemble {
        RandomEnsemble {
            count: 6,
            orders: vec![5, 8],
            min_condition: 2.0,
            max_condition: 20.0,
            distribution: Distribution::LogUniform,
            base_seed: 100,
        }
    }

    #[test]
    fn conditions_span_range() {
        let e = small();
        assert_eq!(e.condition(0), 2.0);
        assert!((e.condition(5) - 20.0).abs() < 1e-12);
        assert_eq!(e.member(3).n, 8);
    }

    #[test]
    fn execution_modes_agree() {
        let e = small();
        let seq = e.build(Execution::Sequential).unwrap();
        let par = e.build(Execution::Parallel).unwrap();
        let cfg = SolverConfig::traced();
        let a = verify_batch(&seq, &cfg, Execution::Sequential).unwrap();
        let b = verify_batch(&par, &cfg, Execution::Parallel).unwrap();
        for ((sa, ra), (sb, rb)) in a.iter().zip(&b) {
            assert_eq!(sa.x, sb.x);
            assert_eq!(ra, rb);
        }
        let xs = solve_batch(&seq, &SolverConfig::default(), Execution::Parallel).unwrap();
        assert_eq!(xs[2].x, a[2].0.x);
    }
}
