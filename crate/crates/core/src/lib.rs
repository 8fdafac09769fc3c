//! Linear conjugate gradient for `min ½xᵀAx + bᵀx` with SPD `A`, plus a
//! verifier that checks the method's exact-arithmetic identities against a
//! recorded iteration trace.
//!
//! - [`linalg`]: vectors, dense/CSR symmetric matrices, SPD validation,
//!   spectrum-controlled test matrices.
//! - [`cg`]: the iteration with exact line-search or gradient-orthogonality
//!   stepsizes and FR/HS/PRP/DY β rules.
//! - [`verify`]: normalized residuals for every identity, from a trace.
//! - [`io`]: MatrixMarket, builtin problem families, trace documents.
//! - [`batch`]: solving and verifying many problems at once.

pub mod batch;
pub mod cg;
mod error;
pub mod io;
pub mod linalg;
pub mod par;
pub mod verify;

pub use error::{Error, Result};
