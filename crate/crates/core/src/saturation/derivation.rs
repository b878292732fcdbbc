//! Derivation steps, their validation and the clause-set sequence `N₀ … N_m`.

use std::collections::BTreeMap;
use std::fmt;

use crate::calculus::{
    constraint_eliminate, constraint_factor, is_purified, paramodulate, resolve, Position,
};
use crate::logic::{Clause, ClauseSet, Name, PointedClause};
use crate::subsumption::{is_tautology, subsumes, velim_normal_form};

use super::SaturationError;

/// Stable clause identifier inside a derivation.
pub type ClauseId = usize;

/// A clause database keyed by identifier. Identical clauses may coexist under
/// different identifiers.
pub type ClauseDb = BTreeMap<ClauseId, Clause>;

/// Why a clause may be deleted by redundancy deletion.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum RedReason {
    Tautology,
    SubsumedBy(ClauseId),
}

/// A fully specified derivation step. Literal indices are zero-based positions in
/// the canonical literal order of the referenced clause.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Step {
    /// Constraint resolution of pointed clause `p.p_lit` with `q.q_lit`.
    Res { p: ClauseId, p_lit: usize, q: ClauseId, q_lit: usize, out: ClauseId },
    /// Constraint factoring of literals `i` and `j` of `c` (keeps `i`).
    Fac { c: ClauseId, i: usize, j: usize, out: ClauseId },
    /// Constraint elimination of the selected constraint literals.
    ConstrElim { c: ClauseId, sel: Vec<usize>, out: ClauseId },
    /// Paramodulation from equation `eq.eq_lit` into `into` at `pos`; `flip`
    /// uses the equation right to left (`None`: try left to right first).
    ParMod { eq: ClauseId, eq_lit: usize, flip: Option<bool>, into: ClauseId, pos: Position, out: ClauseId },
    /// Replaces `c` by its variable-elimination normal form, stored as `out`.
    VarElim { c: ClauseId, out: ClauseId },
    /// Redundancy deletion.
    RedDel { c: ClauseId, reason: RedReason },
    /// Extended purity deletion of every clause containing `x`.
    ExtPurDel { x: Name, positive: bool },
    /// Purified clause deletion of pointed clause `c.lit`.
    PurDel { c: ClauseId, lit: usize },
}

impl Step {
    /// Steps counted against the derivation-length limit: inferences and the two
    /// purity deletions (simplifications are free).
    pub fn is_counted(&self) -> bool {
        !matches!(self, Step::VarElim { .. } | Step::RedDel { .. })
    }

    pub fn is_inference(&self) -> bool {
        matches!(self, Step::Res { .. } | Step::Fac { .. } | Step::ConstrElim { .. } | Step::ParMod { .. })
    }

    /// Identifier created by the step, if any.
    pub fn output(&self) -> Option<ClauseId> {
        match self {
            Step::Res { out, .. }
            | Step::Fac { out, .. }
            | Step::ConstrElim { out, .. }
            | Step::ParMod { out, .. }
            | Step::VarElim { out, .. } => Some(*out),
            _ => None,
        }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Res { p, p_lit, q, q_lit, out } => write!(f, "res {p}.{} {q}.{} -> {out}", p_lit + 1, q_lit + 1),
            Step::Fac { c, i, j, out } => write!(f, "fac {c}.{}.{} -> {out}", i + 1, j + 1),
            Step::ConstrElim { c, sel, out } => {
                write!(f, "constrelim {c}")?;
                for s in sel {
                    write!(f, ".{}", s + 1)?;
                }
                write!(f, " -> {out}")
            }
            Step::ParMod { eq, eq_lit, flip, into, pos, out } => {
                let suffix = if *flip == Some(true) { ":rl" } else { "" };
                write!(f, "parmod {eq}.{}{suffix} {into}@{} -> {out}", eq_lit + 1, pos.to_trace())
            }
            Step::VarElim { c, out } => write!(f, "varelim {c} -> {out}"),
            Step::RedDel { c, reason: RedReason::Tautology } => write!(f, "redel {c} tautology"),
            Step::RedDel { c, reason: RedReason::SubsumedBy(d) } => write!(f, "redel {c} subsumed-by {d}"),
            Step::ExtPurDel { x, positive } => write!(f, "extpurdel {x} {}", if *positive { "+" } else { "-" }),
            Step::PurDel { c, lit } => write!(f, "purdel {c}.{}", lit + 1),
        }
    }
}

/// What a validated step did, recorded for witness extraction and reporting.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum StepEffect {
    Added(ClauseId, Clause),
    Replaced { old: ClauseId, new: ClauseId, clause: Clause },
    Deleted(Vec<(ClauseId, Clause)>),
    Purified { pointed: PointedClause, certificate: Vec<CertificateEntry> },
}

/// One purification-certificate entry in terms of clause identifiers.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CertificateEntry {
    pub clause: ClauseId,
    pub literal: usize,
    pub resolvent: Clause,
    pub subsumer: ClauseId,
}

/// A predicate variable to eliminate together with its arity.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PVarDecl {
    pub name: Name,
    pub arity: usize,
}

impl PVarDecl {
    pub fn new(name: Name, arity: usize) -> Self {
        PVarDecl { name, arity }
    }
}

/// A validated derivation with its intermediate clause sets.
#[derive(Clone, Debug)]
pub struct Derivation {
    xs: Vec<PVarDecl>,
    steps: Vec<Step>,
    effects: Vec<StepEffect>,
    states: Vec<ClauseDb>,
    next_id: ClauseId,
}

impl Derivation {
    /// Starts a derivation from clauses numbered `1..=n` in the given order.
    pub fn new(initial: Vec<Clause>, xs: Vec<PVarDecl>) -> Self {
        let db: ClauseDb = initial.into_iter().enumerate().map(|(i, c)| (i + 1, c)).collect();
        Self::from_db(db, xs)
    }

    pub fn from_db(db: ClauseDb, xs: Vec<PVarDecl>) -> Self {
        let next_id = db.keys().next_back().map_or(1, |k| k + 1);
        Derivation { xs, steps: Vec::new(), effects: Vec::new(), states: vec![db], next_id }
    }

    pub fn xs(&self) -> &[PVarDecl] {
        &self.xs
    }

    pub fn x_names(&self) -> Vec<Name> {
        self.xs.iter().map(|d| d.name.clone()).collect()
    }

    pub fn arity_of(&self, x: &str) -> Option<usize> {
        self.xs.iter().find(|d| &*d.name == x).map(|d| d.arity)
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn effects(&self) -> &[StepEffect] {
        &self.effects
    }

    /// `N_i(D)` for `i ∈ 0..=m`.
    pub fn state(&self, i: usize) -> &ClauseDb {
        &self.states[i]
    }

    pub fn initial(&self) -> &ClauseDb {
        &self.states[0]
    }

    pub fn current(&self) -> &ClauseDb {
        self.states.last().expect("at least the initial state")
    }

    pub fn conclusion_set(&self) -> ClauseSet {
        self.current().values().cloned().collect()
    }

    pub fn next_id(&self) -> ClauseId {
        self.next_id
    }

    /// Number of steps counted against the length limit.
    pub fn counted_len(&self) -> usize {
        self.steps.iter().filter(|s| s.is_counted()).count()
    }

    /// True iff the current clause set mentions no variable of `X̄`.
    pub fn is_eliminating(&self) -> bool {
        let names = self.x_names();
        self.current().values().all(|c| !c.mentions_any(&names))
    }

    /// Indices (zero-based, into `steps`) of the purified clause deletions.
    pub fn purdel_indices(&self) -> Vec<usize> {
        self.steps.iter().enumerate().filter(|(_, s)| matches!(s, Step::PurDel { .. })).map(|(i, _)| i).collect()
    }

    /// Applies a step after validating its side conditions.
    pub fn push(&mut self, step: Step) -> Result<(), SaturationError> {
        let index = self.steps.len();
        let (db, resolved, effect) = apply_step(self.current(), &step, &self.xs)
            .map_err(|reason| SaturationError::InvalidStep { index: index + 1, step: step.to_string(), reason })?;
        if let Some(out) = resolved.output() {
            self.next_id = self.next_id.max(out + 1);
        }
        self.steps.push(resolved);
        self.effects.push(effect);
        self.states.push(db);
        Ok(())
    }

    /// A fresh identifier for the next created clause.
    pub fn fresh_id(&mut self) -> ClauseId {
        let id = self.next_id;
        self.next_id += 1;
        id
    }

    /// The trace, one step per line.
    pub fn to_trace(&self) -> String {
        let mut s = String::new();
        for st in &self.steps {
            s.push_str(&st.to_string());
            s.push('\n');
        }
        s
    }
}

fn get(db: &ClauseDb, id: ClauseId) -> Result<&Clause, String> {
    db.get(&id).ok_or_else(|| format!("clause {id} is not in the current clause set"))
}

fn fresh_out(db: &ClauseDb, out: ClauseId) -> Result<(), String> {
    if db.contains_key(&out) {
        Err(format!("identifier {out} is already in use"))
    } else {
        Ok(())
    }
}

fn is_x(xs: &[PVarDecl], name: Option<&Name>) -> bool {
    name.is_some_and(|n| xs.iter().any(|d| &d.name == n))
}

/// Validates `step` against `db` and returns the successor clause set.
pub fn apply_step(db: &ClauseDb, step: &Step, xs: &[PVarDecl]) -> Result<(ClauseDb, Step, StepEffect), String> {
    let mut next = db.clone();
    match step {
        Step::Res { p, p_lit, q, q_lit, out } => {
            fresh_out(db, *out)?;
            let pc = get(db, *p)?;
            if *p_lit >= pc.len() {
                return Err(format!("clause {p} has no literal {}", p_lit + 1));
            }
            let pointed = PointedClause::of(pc, *p_lit);
            let r = resolve(&pointed, get(db, *q)?, *q_lit).map_err(|e| e.to_string())?;
            next.insert(*out, r.clone());
            Ok((next, step.clone(), StepEffect::Added(*out, r)))
        }
        Step::Fac { c, i, j, out } => {
            fresh_out(db, *out)?;
            let r = constraint_factor(get(db, *c)?, *i, *j).map_err(|e| e.to_string())?;
            next.insert(*out, r.clone());
            Ok((next, step.clone(), StepEffect::Added(*out, r)))
        }
        Step::ConstrElim { c, sel, out } => {
            fresh_out(db, *out)?;
            let r = constraint_eliminate(get(db, *c)?, sel).map_err(|e| e.to_string())?;
            next.insert(*out, r.clone());
            Ok((next, step.clone(), StepEffect::Added(*out, r)))
        }
        Step::ParMod { eq, eq_lit, flip, into, pos, out } => {
            fresh_out(db, *out)?;
            let (e, t) = (get(db, *eq)?, get(db, *into)?);
            let attempts: Vec<bool> = match flip {
                Some(f) => vec![*f],
                None => vec![false, true],
            };
            let mut last = String::from("no orientation applies");
            for f in attempts {
                match paramodulate(e, *eq_lit, f, t, pos) {
                    Ok(r) => {
                        next.insert(*out, r.clone());
                        let resolved = Step::ParMod { eq: *eq, eq_lit: *eq_lit, flip: Some(f), into: *into, pos: pos.clone(), out: *out };
                        return Ok((next, resolved, StepEffect::Added(*out, r)));
                    }
                    Err(err) => last = err.to_string(),
                }
            }
            Err(last)
        }
        Step::VarElim { c, out } => {
            if out != c {
                fresh_out(db, *out)?;
            }
            let old = get(db, *c)?;
            let r = velim_normal_form(old);
            if r == *old {
                return Err(format!("clause {c} has no eliminable constraint"));
            }
            next.remove(c);
            next.insert(*out, r.clone());
            Ok((next, step.clone(), StepEffect::Replaced { old: *c, new: *out, clause: r }))
        }
        Step::RedDel { c, reason } => {
            let cl = get(db, *c)?;
            match reason {
                RedReason::Tautology => {
                    if !is_tautology(cl) {
                        return Err(format!("clause {c} is not a tautology"));
                    }
                }
                RedReason::SubsumedBy(d) => {
                    if d == c {
                        return Err("a clause cannot subsume itself away".into());
                    }
                    if !subsumes(get(db, *d)?, cl) {
                        return Err(format!("clause {d} does not subsume clause {c}"));
                    }
                }
            }
            let removed = next.remove(c).expect("checked above");
            Ok((next, step.clone(), StepEffect::Deleted(vec![(*c, removed)])))
        }
        Step::ExtPurDel { x, positive } => {
            if !is_x(xs, Some(x)) {
                return Err(format!("{x} is not a predicate variable being eliminated"));
            }
            for (id, cl) in db {
                let p = cl.polarity_of(x);
                if !p.is_empty() && !(if *positive { p.positive } else { p.negative }) {
                    return Err(format!("clause {id} has no {} occurrence of {x}", if *positive { "positive" } else { "negative" }));
                }
            }
            let deleted: Vec<(ClauseId, Clause)> =
                db.iter().filter(|(_, cl)| cl.mentions(x)).map(|(id, cl)| (*id, cl.clone())).collect();
            for (id, _) in &deleted {
                next.remove(id);
            }
            Ok((next, step.clone(), StepEffect::Deleted(deleted)))
        }
        Step::PurDel { c, lit } => {
            let cl = get(db, *c)?;
            if *lit >= cl.len() {
                return Err(format!("clause {c} has no literal {}", lit + 1));
            }
            let pointed = PointedClause::of(cl, *lit);
            if !is_x(xs, pointed.designated().pvar_name()) {
                return Err("the designated literal is not a literal of an eliminated predicate variable".into());
            }
            let others: Vec<(ClauseId, Clause)> =
                db.iter().filter(|(id, _)| **id != *c).map(|(id, cl)| (*id, cl.clone())).collect();
            let clauses: Vec<Clause> = others.iter().map(|(_, cl)| cl.clone()).collect();
            let cert = is_purified(&pointed, &clauses).ok_or_else(|| format!("pointed clause {c}.{} is not purified", lit + 1))?;
            let certificate = cert
                .into_iter()
                .map(|e| CertificateEntry {
                    clause: others[e.clause].0,
                    literal: e.literal,
                    resolvent: e.resolvent,
                    subsumer: others[e.subsumer].0,
                })
                .collect();
            next.remove(c);
            Ok((next, step.clone(), StepEffect::Purified { pointed, certificate }))
        }
    }
}
