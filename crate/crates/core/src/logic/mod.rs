//! The shared data model: terms, literals, clauses, formulas, substitutions
//! and predicate substitutions.

pub mod clause;
pub mod formula;
pub mod literal;
pub mod predsubst;
pub mod simplify;
pub mod subst;
pub mod term;

use thiserror::Error;

pub use clause::{rename_literals_apart, Clause, ClauseSet, PointedClause, Polarities};
pub use formula::{Formula, GfpApp};
pub use literal::{Head, Literal};
pub use predsubst::{apply_pred_subst, apply_pred_subst_clause, PredExpr, PredSubst};
pub use simplify::simplify;
pub use subst::{match_term, match_terms, mgu, mgu_terms, subst_from_map, Subst};
pub use term::{name, FreshNames, Name, Term, TermPath};

/// Errors raised by operations on the data model.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("arity mismatch for `{symbol}`: expected {expected}, found {found}")]
    ArityMismatch { symbol: String, expected: usize, found: usize },
}
