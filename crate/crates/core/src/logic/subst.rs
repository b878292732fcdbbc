//! First-order substitutions, most general unifiers and one-way matching.

use std::collections::BTreeMap;
use std::fmt;

use super::term::{Name, Term};

/// A finite mapping from variables to terms, applied simultaneously.
///
/// Identity bindings are never stored.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct Subst {
    map: BTreeMap<Name, Term>,
}

impl Subst {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(v: Name, t: Term) -> Self {
        let mut s = Self::new();
        s.bind(v, t);
        s
    }

    /// Adds a binding, dropping it if it is the identity.
    pub fn bind(&mut self, v: Name, t: Term) {
        if t.as_var() == Some(&v) {
            self.map.remove(&v);
        } else {
            self.map.insert(v, t);
        }
    }

    pub fn get(&self, v: &str) -> Option<&Term> {
        self.map.get(v)
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, &Term)> {
        self.map.iter()
    }

    pub fn domain(&self) -> impl Iterator<Item = &Name> {
        self.map.keys()
    }

    /// Simultaneous application to a term.
    pub fn apply(&self, t: &Term) -> Term {
        if self.map.is_empty() {
            return t.clone();
        }
        match t {
            Term::Var(v) => self.map.get(v).cloned().unwrap_or_else(|| t.clone()),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| self.apply(a)).collect()),
        }
    }

    pub fn apply_all(&self, ts: &[Term]) -> Vec<Term> {
        ts.iter().map(|t| self.apply(t)).collect()
    }

    /// Composition `self` followed by `other`: `t(self.then(other)) = (t self) other`.
    pub fn then(&self, other: &Subst) -> Subst {
        let mut out = Subst::new();
        for (v, t) in &self.map {
            out.bind(v.clone(), other.apply(t));
        }
        for (v, t) in &other.map {
            if !self.map.contains_key(v) {
                out.bind(v.clone(), t.clone());
            }
        }
        out
    }
}

impl fmt::Display for Subst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (v, t)) in self.map.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}↦{t}")?;
        }
        write!(f, "}}")
    }
}

/// Resolves a variable through a triangular binding store.
fn walk<'a>(t: &'a Term, store: &'a BTreeMap<Name, Term>) -> &'a Term {
    let mut cur = t;
    while let Term::Var(v) = cur {
        match store.get(v) {
            Some(next) => cur = next,
            None => break,
        }
    }
    cur
}

fn occurs_walk(v: &str, t: &Term, store: &BTreeMap<Name, Term>) -> bool {
    match walk(t, store) {
        Term::Var(w) => &**w == v,
        Term::App(_, args) => args.iter().any(|a| occurs_walk(v, a, store)),
    }
}

fn resolve(t: &Term, store: &BTreeMap<Name, Term>) -> Term {
    match walk(t, store) {
        Term::Var(w) => Term::Var(w.clone()),
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| resolve(a, store)).collect()),
    }
}

/// Most general unifier of two equal-length term tuples, with occurs check.
///
/// Returns `None` on a symbol clash, an arity mismatch, or an occurs-check failure.
/// The result is idempotent.
pub fn mgu(ts: &[Term], ss: &[Term]) -> Option<Subst> {
    if ts.len() != ss.len() {
        return None;
    }
    let mut store: BTreeMap<Name, Term> = BTreeMap::new();
    let mut stack: Vec<(Term, Term)> = ts.iter().cloned().zip(ss.iter().cloned()).collect();
    while let Some((a, b)) = stack.pop() {
        let a = walk(&a, &store).clone();
        let b = walk(&b, &store).clone();
        match (&a, &b) {
            (Term::Var(x), Term::Var(y)) if x == y => {}
            (Term::Var(x), _) => {
                if occurs_walk(x, &b, &store) {
                    return None;
                }
                store.insert(x.clone(), b.clone());
            }
            (_, Term::Var(y)) => {
                if occurs_walk(y, &a, &store) {
                    return None;
                }
                store.insert(y.clone(), a.clone());
            }
            (Term::App(f, fa), Term::App(g, ga)) => {
                if f != g || fa.len() != ga.len() {
                    return None;
                }
                stack.extend(fa.iter().cloned().zip(ga.iter().cloned()));
            }
        }
    }
    let mut out = Subst::new();
    for v in store.keys() {
        out.bind(v.clone(), resolve(&Term::Var(v.clone()), &store));
    }
    Some(out)
}

/// Unifier of two single terms.
pub fn mgu_terms(t: &Term, s: &Term) -> Option<Subst> {
    mgu(std::slice::from_ref(t), std::slice::from_ref(s))
}

/// One-way matching: extends `sigma` so that `pattern σ = target`, treating the
/// variables of `target` as rigid. Returns `false` (leaving `sigma` possibly
/// extended) on failure; callers clone before speculative matching.
pub fn match_term(pattern: &Term, target: &Term, sigma: &mut BTreeMap<Name, Term>) -> bool {
    match pattern {
        Term::Var(v) => match sigma.get(v) {
            Some(bound) => bound == target,
            None => {
                sigma.insert(v.clone(), target.clone());
                true
            }
        },
        Term::App(f, pargs) => match target {
            Term::App(g, targs) if f == g && pargs.len() == targs.len() => {
                pargs.iter().zip(targs).all(|(p, t)| match_term(p, t, sigma))
            }
            _ => false,
        },
    }
}

/// Matching on tuples; see [`match_term`].
pub fn match_terms(pattern: &[Term], target: &[Term], sigma: &mut BTreeMap<Name, Term>) -> bool {
    pattern.len() == target.len() && pattern.iter().zip(target).all(|(p, t)| match_term(p, t, sigma))
}

/// Converts a raw matcher map into a [`Subst`].
pub fn subst_from_map(map: BTreeMap<Name, Term>) -> Subst {
    let mut s = Subst::new();
    for (v, t) in map {
        s.bind(v, t);
    }
    s
}
