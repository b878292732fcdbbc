//! Clausification, a refutation prover for witness checking, and a
//! finite-model evaluator (with greatest-fixpoint semantics and second-order
//! enumeration) used as a semantic oracle.

mod check;
mod clausify;
mod model;
mod prover;
mod soqe;

use thiserror::Error;

use crate::logic::LogicError;

pub use check::{check_witness, CheckOptions, CheckReport, CheckStatus, ModelCheck, ProverCheck, Verdict};
pub use clausify::{clausify, clausify_avoiding, formula_names};
pub use model::{size_bound, EnumLimits, Env, FiniteModel, ModelIter, Relation, Signature};
pub use prover::{
    countermodel, eqres_std, factor_std, prove, refute, replay_proof, resolve_std, Proof, ProofLine, ProofRule,
    ProverLimits, ProverResult,
};
pub use soqe::{soqe_holds, MAX_TUPLES};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("unbound symbol or variable `{0}`")]
    Unbound(String),
    #[error("formulas with greatest fixpoints cannot be clausified")]
    GfpNotClausifiable,
    #[error("enumerating relations for `{pvar}` needs {tuples} tuples (limit {MAX_TUPLES})")]
    EnumerationTooLarge { pvar: String, tuples: usize },
    #[error(transparent)]
    Logic(#[from] LogicError),
}
