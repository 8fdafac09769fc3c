//! Post-hoc verification of the conjugate gradient identities.
//!
//! Every check reads a recorded [`IterationTrace`](crate::cg::IterationTrace)
//! and reports scale-free residuals: each raw identity residual is divided by
//! the product of the norms of the vectors involved (Euclidean or `A`-norm),
//! so a single tolerance applies across problems.
//!
//! The identities are exact-arithmetic statements. How far they survive
//! rounding is not known a priori; the tolerance schedule in
//! [`TolerancePolicy`] is an engineering choice and reports say so.

mod checks;
mod report;

pub use checks::{
    check_beta_agreement, check_classical_identities, check_finite_termination, check_gradient_conjugacy,
    check_stepsize_equivalence, verify_trace, Verifier,
};
pub use report::{
    CheckKind, CheckReport, IdentityId, IdentityResidual, Index, TolerancePolicy, Tolerances, VerificationReport,
    RELAXATION_FACTOR, RELAXATION_THRESHOLD,
};
