//! Constraint reduction for linear bosonic (CCR/Weyl) systems at desk scale.
//!
//! The crate implements the T-procedure for linear Weyl constraints over
//! finite-dimensional symplectic spaces, local nets of constrained symplectic
//! data with checkers for the weak Haag-Kastler axioms, and a fully
//! discretized Gupta-Bleuler electromagnetism model on a momentum grid over
//! the light-cone mantle, including a truncated Fock-Krein layer and the
//! spectral condition.
//!
//! Layering, bottom up:
//!
//! * [`symspace`] — (pre)symplectic linear algebra: spaces, subspaces,
//!   commutants, radicals, quotients.
//! * [`exact`] — a parallel exact backend over rationals, used as the
//!   brute-force oracle for rank decisions on integer inputs.
//! * [`weyl`] — the Weyl *-algebra with exact group labels, its norms and
//!   the state functionals (central, characteristic-subspace, quasifree).
//! * [`reduce`] — the T-procedure, constraint equivalence, reduction by
//!   stages, and the global-vs-local comparison.
//! * [`net`] — region posets, local assignments and the weak-axiom checkers.
//! * [`gb`] — the discretized Gupta-Bleuler model: grid, forms, gauge flow,
//!   test-function subspaces, Cauchy data, Poincare action, region sampling.
//! * [`fock`] — the particle-number-truncated Fock-Krein layer.
//! * [`scenario`], [`suites`], [`report`] — the scenario-driven verification
//!   runner behind the `ccr-reduce` binary.
//!
//! Every capability has a runnable example under `examples/`; start with
//! `cargo run --release --example t_procedure_basics`.

pub mod exact;
pub mod fock;
pub mod gb;
pub mod net;
pub mod reduce;
pub mod report;
pub mod scenario;
pub mod suites;
pub mod symspace;
pub mod tol;
pub mod weyl;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("operands belong to different spaces ({left} vs {right})")]
    SpaceMismatch { left: String, right: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition violated: {0}")]
    PreconditionViolation(String),

    #[error("constraint set is not first class: B(f, h) = {value:.6e} for a pair of constraint directions (indices {i}, {j})")]
    FirstClassViolation { i: usize, j: usize, value: f64 },

    #[error("stage {stage} is not admissible: a constraint direction leaves the commutant of the previous stage (residual {residual:.6e})")]
    StageAdmissibility { stage: usize, residual: f64 },

    #[error("unsupported group action: {0}")]
    UnsupportedAction(String),

    #[error("scenario error: {0}")]
    Scenario(String),
}

pub type Result<T> = std::result::Result<T, Error>;
