//! Problem files, background theories, graph-reachability encoding and the
//! Ackermann fast path.

mod ackermann;
mod graph;
mod lexer;
mod parse;

use std::fmt;

use thiserror::Error;

use crate::logic::Clause;
use crate::saturation::PVarDecl;
use crate::verify::Signature;

pub use ackermann::ackermann_witness;
pub use graph::{encode_graph, parse_graph, GraphSpec};
pub use parse::{parse_clauses, parse_formula, parse_problem, parse_witness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrontendError {
    #[error("line {line}, column {col}: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("line {line}: `{symbol}` is used with arity {second} but earlier with arity {first}")]
    ArityConflict { symbol: String, first: usize, second: usize, line: usize },
    #[error("line {line}: predicate variable `{symbol}` is used as a function symbol")]
    PVarAsFunction { symbol: String, line: usize },
    #[error("line {line}: `{symbol}` is used both as a predicate and as a function symbol")]
    KindConflict { symbol: String, line: usize },
    #[error("line {line}: theory clauses may not mention the predicate variable `{pvar}`")]
    TheoryMentionsPVar { pvar: String, line: usize },
    #[error("line {line}: `{pvar}` is not a declared predicate variable")]
    UnknownPVar { pvar: String, line: usize },
    #[error("line {line}: `{pvar}` is bound twice")]
    DuplicateBinding { pvar: String, line: usize },
    #[error("theory clause {index} mentions the predicate variable `{pvar}`")]
    InvalidTheory { index: usize, pvar: String },
    #[error("line {line}: `{symbol}` is reserved for generated constants")]
    ReservedSymbol { symbol: String, line: usize },
    #[error("graph: {0}")]
    Graph(String),
}

impl FrontendError {
    pub(crate) fn syntax(line: usize, col: usize, message: impl Into<String>) -> Self {
        FrontendError::Syntax { line, col, message: message.into() }
    }
}

/// A second-order quantifier-elimination problem `∃X̄ N`, optionally relative
/// to a background theory `T` of clauses without predicate variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Problem {
    pub xs: Vec<PVarDecl>,
    pub clauses: Vec<Clause>,
    pub theory: Vec<Clause>,
    /// Function and predicate symbols used by `clauses` and `theory`.
    pub signature: Signature,
    /// Where the problem came from (file name, generator), if known.
    pub origin: Option<String>,
}

impl Problem {
    pub fn from_parts(xs: Vec<PVarDecl>, clauses: Vec<Clause>, theory: Vec<Clause>) -> Self {
        let signature = Signature::of_clauses(clauses.iter().chain(&theory));
        Problem { xs, clauses, theory, signature, origin: None }
    }

    pub fn with_origin(mut self, origin: impl Into<String>) -> Self {
        self.origin = Some(origin.into());
        self
    }

    /// Sum over all clauses of the non-logical symbol counts of their literals.
    pub fn input_size(&self) -> usize {
        self.clauses.iter().chain(&self.theory).map(Clause::nonlogical_size).sum()
    }

    /// All clauses, theory included (the clause set after [`merge_theory`]).
    pub fn all_clauses(&self) -> Vec<Clause> {
        self.clauses.iter().chain(&self.theory).cloned().collect()
    }
}

/// Renders the problem in the file format accepted by [`parse_problem`].
impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(o) = &self.origin {
            writeln!(f, "# {o}")?;
        }
        if !self.xs.is_empty() {
            let decls: Vec<String> = self.xs.iter().map(|d| format!("{}/{}", d.name, d.arity)).collect();
            writeln!(f, "exists {}.", decls.join(", "))?;
        }
        for c in &self.theory {
            writeln!(f, "theory {}", c.to_problem_string())?;
        }
        for c in &self.clauses {
            writeln!(f, "{}", c.to_problem_string())?;
        }
        Ok(())
    }
}

/// Folds the background theory into the clause set: `∃X̄ (T ∧ N)`.
/// The problem's clauses come first, followed by the theory clauses.
pub fn merge_theory(p: &Problem) -> Result<Problem, FrontendError> {
    for (i, c) in p.theory.iter().enumerate() {
        if let Some(x) = c.pvars().into_iter().find(|x| p.xs.iter().any(|d| &d.name == x)) {
            return Err(FrontendError::InvalidTheory { index: i + 1, pvar: x.to_string() });
        }
    }
    let mut out = Problem::from_parts(p.xs.clone(), p.all_clauses(), Vec::new());
    out.origin = p.origin.clone();
    Ok(out)
}
