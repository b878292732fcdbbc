//! Witness extraction from eliminating derivations.
//!
//! Every derivation step contributes a witness-transforming substitution; the
//! witness of the whole derivation is their composition. Purified clause
//! deletions contribute the local resolution closure of the deleted clause in
//! one of three finite forms: a bottom-up iterate `B_P^k` (first-order, when
//! an acyclic purification subsumption exists), a greatest fixpoint, or the
//! closure itself when it is finite within a budget.

mod acyclic;
mod closure;
mod compose;

use thiserror::Error;

use crate::logic::LogicError;

pub use acyclic::{find_acyclic, longest_path, AcyclicFailure, AcyclicLimits, AcyclicPurification, PsEdge};
pub use closure::{b_k, clause_set_to_expr, fresh_constants, gfp_expr, lres, make_alpha};
pub use compose::{compose, tau_purdel, FixpointCause, PurDelMode, PurDelWitness, Witness, WitnessMode, WitnessOptions};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("resolution closure did not stabilise within {budget} inferences")]
    BudgetExceeded { budget: usize },
    #[error("the derivation is not eliminating")]
    NotEliminating,
    #[error("step {step}: no acyclic purification subsumption ({reason})")]
    NotAcyclic { step: usize, reason: String },
    #[error("step {step}: {source}")]
    Step { step: usize, source: Box<WitnessError> },
    #[error(transparent)]
    Logic(#[from] LogicError),
}
