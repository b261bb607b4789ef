//! Online mirror descent with barrier-type mirror maps.
//!
//! This crate implements round-based online learners for log-loss problems:
//!
//! * **Portfolio selection** over the probability simplex, with losses
//!   `f_t(x) = -ln <a_t, x>` driven by per-round price relatives `a_t`.
//!   Learners: a smoothed exponentiated-gradient method ([`ops::eg_round`]),
//!   online mirror descent with the log-barrier mirror map
//!   ([`ops::lbomd_round`]), and follow-the-regularized-leader with
//!   linearized losses and the log-barrier regularizer
//!   ([`ops::lbftrl_round`]).
//! * **Density-matrix learning** over the set of `d x d` density matrices,
//!   with losses `f_t(rho) = -ln tr(A_t rho)` driven by per-round observables
//!   `A_t`. Learner: online mirror descent with the log-determinant mirror
//!   map ([`quantum::qlbomd_round`]).
//!
//! Supporting machinery: a generic mirror-descent engine over a
//! [`omd::MirrorMap`], certified offline comparators (best constantly
//! rebalanced portfolio / best fixed density matrix) via away-step
//! Frank-Wolfe ([`comparator`]), and a numerical checker for the structural
//! inequalities the regret analysis relies on ([`verify`]).

// Validation deliberately writes `!(x > 0.0)` instead of `x <= 0.0`: the
// negated form is true for NaN, so NaN inputs fail validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod comparator;
pub mod omd;
pub mod ops;
pub mod quantum;
mod scalar;
pub mod simplex;
pub mod verify;

use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Input failed validation (dimension, domain, or normalization).
    #[error("invalid input: {0}")]
    Invalid(String),

    /// A quantity that must be finite was NaN or infinite.
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    /// A round could not be played because the loss is infinite
    /// (e.g. `<a, x> <= 0` at the current iterate).
    #[error("degenerate round: {0}")]
    Degenerate(String),

    /// The safeguarded Newton solver exhausted its iteration budget.
    #[error("scalar solver did not converge after {iterations} iterations (residual {residual:e})")]
    NewtonNonConvergence { iterations: usize, residual: f64 },

    /// An iterative optimizer hit its iteration budget before certifying
    /// the requested gap.
    #[error("iteration budget {budget} exhausted (best certified gap {gap:e})")]
    IterationBudget { budget: usize, gap: f64 },

    /// Two parallel sequences that must have equal length do not.
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn all_finite(v: &[f64]) -> bool {
    v.iter().all(|x| x.is_finite())
}
