//! Derivations in the SCAN calculus: recording, validation, preprocessing,
//! purification, backtracking search and scripted replay.

mod derivation;
mod pool;
mod preprocess;
mod purify;
mod search;
mod trace;

use std::time::Duration;

use thiserror::Error;

use crate::logic::Clause;

pub use derivation::{
    apply_step, CertificateEntry, ClauseDb, ClauseId, Derivation, PVarDecl, RedReason, Step, StepEffect,
};
pub use pool::{LemmaPool, PoolEntry, PoolOrigin};
pub use preprocess::preprocess;
pub use purify::{purify, PurifyOutcome};
pub use search::{candidates, search, Search, SearchStats};
pub use trace::{parse_step, parse_trace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SaturationError {
    #[error("invalid step {index} (`{step}`): {reason}")]
    InvalidStep { index: usize, step: String, reason: String },
    #[error("trace line {line}: {message}")]
    TraceParse { line: usize, message: String },
}

/// Resource limits for derivation search.
#[derive(Clone, Debug)]
pub struct SearchLimits {
    /// Maximum number of counted steps (inferences and purity deletions).
    pub max_steps: usize,
    /// Wall-clock budget for the whole search.
    pub timeout: Duration,
    /// Inferences allowed inside one purification before it counts as diverged.
    pub purify_budget: usize,
    /// Maximum number of pointed-clause choices explored.
    pub max_branches: usize,
    /// Maximum number of clauses in the equality lemma pool.
    pub pool_max_clauses: usize,
    /// Seed for shuffling ties between equally ranked pointed clauses.
    pub seed: Option<u64>,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_steps: 50,
            timeout: Duration::from_secs(10),
            purify_budget: 40,
            max_branches: 2_000,
            pool_max_clauses: 1_500,
            seed: None,
        }
    }
}

/// Replays a scripted derivation, validating every step.
pub fn replay(initial: Vec<Clause>, xs: Vec<PVarDecl>, steps: &[Step]) -> Result<Derivation, SaturationError> {
    let mut d = Derivation::new(initial, xs);
    for s in steps {
        d.push(s.clone())?;
    }
    Ok(d)
}

/// Replays a derivation given as trace text.
pub fn replay_trace(initial: Vec<Clause>, xs: Vec<PVarDecl>, trace: &str) -> Result<Derivation, SaturationError> {
    let steps = parse_trace(trace)?;
    replay(initial, xs, &steps)
}
