//! A given-clause refutation prover with unrestricted binary resolution,
//! factoring, equality resolution and paramodulation, used to check witnesses.
//!
//! Proofs are recorded as numbered lines in the derivation-trace style
//! (`res p.i q.j -> n`, `fac c.i.j -> n`, `eqres c.i -> n`,
//! `parmod e.i[:rl] c@pos -> n`) and can be replayed independently.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};
use std::fmt;
use std::time::{Duration, Instant};

use crate::calculus::{paramodulants, paramodulate, ParamodOptions, Position};
use crate::logic::{mgu, rename_literals_apart, Clause, Formula, FreshNames, Literal, Name};
use crate::subsumption::{is_tautology, subsumes};

use super::clausify::{clausify_avoiding, formula_names};
use super::model::{size_bound, Env, ModelIter, Signature};

/// How a proof clause was obtained. Literal indices are zero-based.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ProofRule {
    Input,
    Res { p: usize, i: usize, q: usize, j: usize },
    Fac { c: usize, i: usize, j: usize },
    EqRes { c: usize, i: usize },
    ParMod { eq: usize, i: usize, flip: bool, into: usize, pos: Position },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ProofLine {
    pub id: usize,
    pub rule: ProofRule,
    pub clause: Clause,
}

impl fmt::Display for ProofLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let id = self.id;
        match &self.rule {
            ProofRule::Input => write!(f, "input {id}")?,
            ProofRule::Res { p, i, q, j } => write!(f, "res {p}.{} {q}.{} -> {id}", i + 1, j + 1)?,
            ProofRule::Fac { c, i, j } => write!(f, "fac {c}.{}.{} -> {id}", i + 1, j + 1)?,
            ProofRule::EqRes { c, i } => write!(f, "eqres {c}.{} -> {id}", i + 1)?,
            ProofRule::ParMod { eq, i, flip, into, pos } => {
                write!(f, "parmod {eq}.{}{} {into}@{} -> {id}", i + 1, if *flip { ":rl" } else { "" }, pos.to_trace())?
            }
        }
        write!(f, "  # {}", self.clause)
    }
}

/// A refutation: input lines followed by inferences ending in the empty clause.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Proof {
    pub lines: Vec<ProofLine>,
}

impl fmt::Display for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.lines {
            writeln!(f, "{l}")?;
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ProverResult {
    Proved(Proof),
    /// A finite model of the premises falsifying the goal.
    Disproved(String),
    Unknown(String),
}

impl ProverResult {
    pub fn is_proved(&self) -> bool {
        matches!(self, ProverResult::Proved(_))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ProverLimits {
    pub timeout: Duration,
    pub max_clauses: usize,
    /// Look for a finite countermodel (size ≤ 3) when no refutation is found.
    pub countermodels: bool,
}

impl Default for ProverLimits {
    fn default() -> Self {
        ProverLimits { timeout: Duration::from_secs(5), max_clauses: 20_000, countermodels: true }
    }
}

/// Standard binary resolution of `p.i` with `q.j` (renamed apart).
pub fn resolve_std(p: &Clause, i: usize, q: &Clause, j: usize) -> Option<Clause> {
    let (qlits, _) = rename_literals_apart(q.literals(), &p.var_set());
    let (l, m) = (p.literals().get(i)?, qlits.get(j)?);
    if !l.is_dual_kind(m) {
        return None;
    }
    let s = mgu(&l.args, &m.args)?;
    let mut lits: Vec<Literal> = p.without(i).iter().map(|x| x.apply(&s)).collect();
    lits.extend(qlits.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| x.apply(&s)));
    Some(Clause::new(lits))
}

/// Factoring of literals `i` and `j` (keeps `i`).
pub fn factor_std(c: &Clause, i: usize, j: usize) -> Option<Clause> {
    let (l, m) = (c.literals().get(i)?, c.literals().get(j)?);
    if i == j || !l.same_kind(m) {
        return None;
    }
    let s = mgu(&l.args, &m.args)?;
    Some(Clause::new(c.without(j).iter().map(|x| x.apply(&s)).collect()))
}

/// Equality resolution on the disequation `i`.
pub fn eqres_std(c: &Clause, i: usize) -> Option<Clause> {
    let l = c.literals().get(i)?;
    if !l.is_constraint() {
        return None;
    }
    let s = mgu(&l.args[..1], &l.args[1..])?;
    Some(Clause::new(c.without(i).iter().map(|x| x.apply(&s)).collect()))
}

/// Re-derives every line of a proof and checks it ends in the empty clause.
pub fn replay_proof(proof: &Proof) -> Result<(), String> {
    let mut known: std::collections::BTreeMap<usize, Clause> = Default::default();
    for line in &proof.lines {
        let get = |id: &usize| known.get(id).ok_or_else(|| format!("line {}: unknown clause {id}", line.id));
        let derived = match &line.rule {
            ProofRule::Input => Some(line.clause.clone()),
            ProofRule::Res { p, i, q, j } => resolve_std(get(p)?, *i, get(q)?, *j),
            ProofRule::Fac { c, i, j } => factor_std(get(c)?, *i, *j),
            ProofRule::EqRes { c, i } => eqres_std(get(c)?, *i),
            ProofRule::ParMod { eq, i, flip, into, pos } => paramodulate(get(eq)?, *i, *flip, get(into)?, pos).ok(),
        };
        match derived {
            Some(c) if c == line.clause => {
                known.insert(line.id, c);
            }
            _ => return Err(format!("line {} does not derive {}", line.id, line.clause)),
        }
    }
    match proof.lines.last() {
        Some(l) if l.clause.is_empty() => Ok(()),
        _ => Err("the proof does not end in the empty clause".into()),
    }
}

fn has_trivial_equation(c: &Clause) -> bool {
    c.literals().iter().any(|l| l.is_equality() && l.positive && l.args[0] == l.args[1])
}

/// Subsumption for the prover's redundancy checks. Set subsumption alone would
/// let a clause discard its own factors (`P(x) ∨ P(y)` vs `P(x)`), which loses
/// completeness, so the subsumer may not be longer than the subsumed clause.
fn prover_subsumes(c: &Clause, e: &Clause) -> bool {
    c.len() <= e.len() && subsumes(c, e)
}

fn weight(c: &Clause) -> usize {
    c.nonlogical_size() + c.len()
}

struct Saturation {
    clauses: Vec<(Clause, ProofRule)>,
    passive: BinaryHeap<Reverse<(usize, usize)>>,
    active: Vec<usize>,
}

impl Saturation {
    fn add(&mut self, c: Clause, rule: ProofRule) -> Option<usize> {
        if is_tautology(&c) || has_trivial_equation(&c) {
            return None;
        }
        let id = self.clauses.len();
        self.passive.push(Reverse((weight(&c), id)));
        self.clauses.push((c, rule));
        Some(id)
    }

    fn proof_of(&self, empty: usize) -> Proof {
        let mut needed = BTreeSet::new();
        let mut stack = vec![empty];
        while let Some(n) = stack.pop() {
            if !needed.insert(n) {
                continue;
            }
            match &self.clauses[n].1 {
                ProofRule::Input => {}
                ProofRule::Res { p, q, .. } => stack.extend([*p, *q]),
                ProofRule::Fac { c, .. } | ProofRule::EqRes { c, .. } => stack.push(*c),
                ProofRule::ParMod { eq, into, .. } => stack.extend([*eq, *into]),
            }
        }
        // Ids grow with derivation order, so ascending order is topological.
        let renumber: std::collections::BTreeMap<usize, usize> =
            needed.iter().enumerate().map(|(k, old)| (*old, k + 1)).collect();
        let lines = needed
            .iter()
            .map(|old| {
                let (c, rule) = &self.clauses[*old];
                let r = |x: &usize| renumber[x];
                let rule = match rule {
                    ProofRule::Input => ProofRule::Input,
                    ProofRule::Res { p, i, q, j } => ProofRule::Res { p: r(p), i: *i, q: r(q), j: *j },
                    ProofRule::Fac { c, i, j } => ProofRule::Fac { c: r(c), i: *i, j: *j },
                    ProofRule::EqRes { c, i } => ProofRule::EqRes { c: r(c), i: *i },
                    ProofRule::ParMod { eq, i, flip, into, pos } => {
                        ProofRule::ParMod { eq: r(eq), i: *i, flip: *flip, into: r(into), pos: pos.clone() }
                    }
                };
                ProofLine { id: renumber[old], rule, clause: c.clone() }
            })
            .collect();
        Proof { lines }
    }
}

/// Refutes `clauses` by saturation. `Ok(proof)` on the empty clause,
/// `Err(true)` if saturated without it, `Err(false)` on resource exhaustion.
pub fn refute(clauses: &[Clause], limits: &ProverLimits) -> Result<Proof, bool> {
    let deadline = Instant::now() + limits.timeout;
    let mut s = Saturation { clauses: Vec::new(), passive: BinaryHeap::new(), active: Vec::new() };
    for c in clauses {
        s.add(c.clone(), ProofRule::Input);
    }
    let opts = ParamodOptions::default();
    while let Some(Reverse((_, g))) = s.passive.pop() {
        if Instant::now() > deadline || s.clauses.len() > limits.max_clauses {
            return Err(false);
        }
        let gc = s.clauses[g].0.clone();
        if gc.is_empty() {
            return Ok(s.proof_of(g));
        }
        if s.active.iter().any(|&a| prover_subsumes(&s.clauses[a].0, &gc)) {
            continue;
        }
        let clauses = &s.clauses;
        s.active.retain(|&a| !prover_subsumes(&gc, &clauses[a].0));
        s.active.push(g);

        let mut new: Vec<(Clause, ProofRule)> = Vec::new();
        for i in 0..gc.len() {
            for j in (i + 1)..gc.len() {
                if let Some(c) = factor_std(&gc, i, j) {
                    new.push((c, ProofRule::Fac { c: g, i, j }));
                }
            }
            if let Some(c) = eqres_std(&gc, i) {
                new.push((c, ProofRule::EqRes { c: g, i }));
            }
        }
        for &a in &s.active {
            let ac = &s.clauses[a].0;
            for (i, l) in gc.literals().iter().enumerate() {
                for (j, m) in ac.literals().iter().enumerate() {
                    if l.is_dual_kind(m) {
                        if let Some(c) = resolve_std(&gc, i, ac, j) {
                            new.push((c, ProofRule::Res { p: g, i, q: a, j }));
                        }
                    }
                }
            }
            for pm in paramodulants(&gc, ac, opts) {
                new.push((pm.conclusion, ProofRule::ParMod { eq: g, i: pm.eq_idx, flip: pm.flip, into: a, pos: pm.pos }));
            }
            if a != g {
                for pm in paramodulants(ac, &gc, opts) {
                    new.push((pm.conclusion, ProofRule::ParMod { eq: a, i: pm.eq_idx, flip: pm.flip, into: g, pos: pm.pos }));
                }
            }
        }
        for (c, rule) in new {
            let empty = c.is_empty();
            if let Some(id) = s.add(c, rule) {
                if empty {
                    return Ok(s.proof_of(id));
                }
            }
        }
    }
    Err(true)
}

/// Tries to prove `premises ⊨ goal`.
pub fn prove(premises: &[Clause], goal: &Formula, limits: &ProverLimits) -> ProverResult {
    if goal.contains_gfp() {
        return ProverResult::Unknown("fixpoint goals are not first-order".into());
    }
    let mut names: Vec<String> = formula_names(goal);
    for c in premises {
        names.extend(formula_names(&Formula::from_clause(c)));
    }
    let mut fresh = FreshNames::avoiding(names);
    let negated = match clausify_avoiding(&Formula::not(goal.clone()), &mut fresh) {
        Ok(cs) => cs,
        Err(e) => return ProverResult::Unknown(e.to_string()),
    };
    let mut input: Vec<Clause> = premises.to_vec();
    input.extend(negated);
    match refute(&input, limits) {
        Ok(proof) => ProverResult::Proved(proof),
        Err(saturated) => {
            if limits.countermodels {
                if let Some(m) = countermodel(premises, goal, 3, 50_000) {
                    return ProverResult::Disproved(m);
                }
            }
            ProverResult::Unknown(if saturated { "saturated without refutation".into() } else { "resource limit reached".into() })
        }
    }
}

/// A model (size ≤ `max_size`) of `premises` in which the closed `goal` is false.
pub fn countermodel(premises: &[Clause], goal: &Formula, max_size: usize, cap: usize) -> Option<String> {
    let mut sig = Signature::of_clauses(premises);
    sig.add_formula(goal);
    let free: Vec<Name> = goal.free_vars().into_iter().collect();
    if !free.is_empty() || !goal.pvars().is_empty() {
        return None;
    }
    let bound = size_bound(&sig, max_size);
    for m in ModelIter::new(&sig, bound).take(cap) {
        let env = Env::new();
        if m.eval_clauses(&env, premises).ok()? && !m.eval(&mut env.clone(), goal).ok()? {
            return Some(m.to_string());
        }
    }
    None
}
