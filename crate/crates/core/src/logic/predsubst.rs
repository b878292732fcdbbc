//! Predicate expressions `λū. φ` and predicate substitutions `[X ← α]`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Serialize, Serializer};

use super::clause::Clause;
use super::formula::Formula;
use super::literal::Head;
use super::simplify::simplify;
use super::subst::Subst;
use super::term::{FreshNames, Name, Term};
use super::LogicError;

/// A predicate expression `λū. body`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PredExpr {
    pub vars: Vec<Name>,
    pub body: Formula,
}

impl PredExpr {
    pub fn new(vars: Vec<Name>, body: Formula) -> Self {
        PredExpr { vars, body }
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    /// `λū. ⊥`.
    pub fn bottom(arity: usize) -> Self {
        PredExpr { vars: default_vars(arity), body: Formula::False }
    }

    /// `λū. ⊤`.
    pub fn top(arity: usize) -> Self {
        PredExpr { vars: default_vars(arity), body: Formula::True }
    }

    /// `λū. X(ū)`: the expression that leaves `X` unchanged.
    pub fn identity(x: &Name, arity: usize) -> Self {
        let vars = default_vars(arity);
        let body = Formula::Atom(Head::PVar(x.clone()), vars.iter().map(|v| Term::Var(v.clone())).collect());
        PredExpr { vars, body }
    }

    pub fn is_identity_for(&self, x: &Name) -> bool {
        match &self.body {
            Formula::Atom(Head::PVar(y), args) => {
                y == x
                    && args.len() == self.vars.len()
                    && args.iter().zip(&self.vars).all(|(a, v)| a.as_var() == Some(v))
            }
            _ => false,
        }
    }

    /// `λū. ¬body`.
    pub fn negated(&self) -> Self {
        PredExpr { vars: self.vars.clone(), body: Formula::not(self.body.clone()) }
    }

    /// Free first-order variables of the body other than the λ-bound ones.
    pub fn params(&self) -> BTreeSet<Name> {
        let mut fv = self.body.free_vars();
        for v in &self.vars {
            fv.remove(v);
        }
        fv
    }

    /// β-reduction: the body with `ū ↦ args`, avoiding capture.
    pub fn instantiate(&self, args: &[Term]) -> Formula {
        let mut s = Subst::new();
        for (v, t) in self.vars.iter().zip(args) {
            s.bind(v.clone(), t.clone());
        }
        self.body.subst_terms(&s)
    }

    pub fn simplified(&self) -> Self {
        PredExpr { vars: self.vars.clone(), body: simplify(&self.body) }
    }

    /// Renames bound variables to short readable names (`u`, `v`, `w`, …).
    pub fn tidy(&self) -> Self {
        tidy_expr(self)
    }

    pub fn size(&self) -> usize {
        1 + self.vars.len() + self.body.size()
    }
}

impl fmt::Display for PredExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "lambda")?;
        for v in &self.vars {
            write!(f, " {v}")?;
        }
        write!(f, ". {}", self.body)
    }
}

impl Serialize for PredExpr {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

fn default_vars(arity: usize) -> Vec<Name> {
    const NAMES: [&str; 4] = ["u", "v", "w", "z"];
    (0..arity)
        .map(|i| if i < NAMES.len() { super::name(NAMES[i]) } else { super::name(&format!("u{i}")) })
        .collect()
}

/// A finite mapping `[X₁ ← α₁, …]` from predicate variables to expressions.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct PredSubst {
    map: BTreeMap<Name, PredExpr>,
}

impl PredSubst {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(x: Name, e: PredExpr) -> Self {
        let mut s = Self::new();
        s.bind(x, e);
        s
    }

    /// Adds a binding; identity bindings `X ← λū. X(ū)` are dropped.
    pub fn bind(&mut self, x: Name, e: PredExpr) {
        if e.is_identity_for(&x) {
            self.map.remove(&x);
        } else {
            self.map.insert(x, e);
        }
    }

    pub fn get(&self, x: &str) -> Option<&PredExpr> {
        self.map.get(x)
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, &PredExpr)> {
        self.map.iter()
    }

    pub fn domain(&self) -> impl Iterator<Item = &Name> {
        self.map.keys()
    }

    pub fn without(&self, x: &str) -> PredSubst {
        let mut s = self.clone();
        s.map.remove(x);
        s
    }

    /// Composition "`self` then `other`": `φ(self.then(other)) = (φ self) other`.
    pub fn then(&self, other: &PredSubst) -> Result<PredSubst, LogicError> {
        let mut out = PredSubst::new();
        for (x, e) in &self.map {
            let body = apply_pred_subst(&e.body, other)?;
            out.bind(x.clone(), PredExpr { vars: e.vars.clone(), body });
        }
        for (x, e) in &other.map {
            if !self.map.contains_key(x) {
                out.bind(x.clone(), e.clone());
            }
        }
        Ok(out)
    }

    /// Simplifies and tidies every bound expression.
    pub fn simplified(&self) -> PredSubst {
        let mut out = PredSubst::new();
        for (x, e) in &self.map {
            out.bind(x.clone(), e.simplified().tidy());
        }
        out
    }

    pub fn size(&self) -> usize {
        self.map.values().map(PredExpr::size).sum()
    }
}

impl fmt::Display for PredSubst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (x, e)) in self.map.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x} ← {e}")?;
        }
        write!(f, "]")
    }
}

/// Simultaneously replaces each `X(t̄)` with `X ∈ dom(π)` by the β-reduced expression.
///
/// Binders of `φ` are renamed when they would capture parameters of `π`.
pub fn apply_pred_subst(phi: &Formula, pi: &PredSubst) -> Result<Formula, LogicError> {
    if pi.is_empty() {
        return Ok(phi.clone());
    }
    let mut params = BTreeSet::new();
    for e in pi.map.values() {
        params.extend(e.params());
    }
    apply_rec(phi, pi, &params)
}

/// Applies `π` to the universal closure of a clause.
pub fn apply_pred_subst_clause(c: &Clause, pi: &PredSubst) -> Result<Formula, LogicError> {
    apply_pred_subst(&Formula::from_clause(c), pi)
}

fn apply_rec(phi: &Formula, pi: &PredSubst, params: &BTreeSet<Name>) -> Result<Formula, LogicError> {
    Ok(match phi {
        Formula::True | Formula::False => phi.clone(),
        Formula::Atom(Head::PVar(x), args) => match pi.get(x) {
            Some(e) => {
                if e.arity() != args.len() {
                    return Err(LogicError::ArityMismatch {
                        symbol: x.to_string(),
                        expected: args.len(),
                        found: e.arity(),
                    });
                }
                e.instantiate(args)
            }
            None => phi.clone(),
        },
        Formula::Atom(..) => phi.clone(),
        Formula::Not(a) => Formula::not(apply_rec(a, pi, params)?),
        Formula::And(v) => Formula::And(v.iter().map(|f| apply_rec(f, pi, params)).collect::<Result<_, _>>()?),
        Formula::Or(v) => Formula::Or(v.iter().map(|f| apply_rec(f, pi, params)).collect::<Result<_, _>>()?),
        Formula::Implies(a, b) => Formula::implies(apply_rec(a, pi, params)?, apply_rec(b, pi, params)?),
        Formula::Iff(a, b) => Formula::iff(apply_rec(a, pi, params)?, apply_rec(b, pi, params)?),
        Formula::Forall(v, f) | Formula::Exists(v, f) => {
            let (v2, f2) = if params.contains(v) {
                let mut fresh = FreshNames::avoiding(
                    f.all_var_names().iter().chain(params.iter()).map(|n| n.to_string()),
                );
                let nv = fresh.fresh_like(v);
                (nv.clone(), f.subst_terms(&Subst::singleton(v.clone(), Term::Var(nv))))
            } else {
                (v.clone(), (**f).clone())
            };
            let body = apply_rec(&f2, pi, params)?;
            if matches!(phi, Formula::Forall(..)) {
                Formula::forall(v2, body)
            } else {
                Formula::exists(v2, body)
            }
        }
        Formula::Gfp(g) => {
            let inner = pi.without(&g.pred);
            let mut vars = g.vars.clone();
            let mut body = g.body.clone();
            let clash: Vec<Name> = vars.iter().filter(|u| params.contains(*u)).cloned().collect();
            if !clash.is_empty() {
                let mut fresh = FreshNames::avoiding(
                    body.all_var_names().iter().chain(params.iter()).chain(vars.iter()).map(|n| n.to_string()),
                );
                let mut ren = Subst::new();
                for u in vars.iter_mut() {
                    if clash.contains(u) {
                        let nu = fresh.fresh_like(u);
                        ren.bind(u.clone(), Term::Var(nu.clone()));
                        *u = nu;
                    }
                }
                body = body.subst_terms(&ren);
            }
            let body = if inner.is_empty() { body } else { apply_rec(&body, &inner, params)? };
            Formula::gfp(g.pred.clone(), vars, body, g.args.clone())
        }
    })
}

/// Renames λ- and quantifier-bound variables to readable names.
fn tidy_expr(e: &PredExpr) -> PredExpr {
    let params = e.params();
    let mut fresh = FreshNames::avoiding(params.iter().map(|n| n.to_string()));
    let mut s = Subst::new();
    let mut vars = Vec::new();
    for v in &e.vars {
        let nv = fresh.fresh_like(preferred(vars.len()));
        s.bind(v.clone(), Term::Var(nv.clone()));
        vars.push(nv);
    }
    let body = e.body.subst_terms(&s);
    let body = tidy_binders(&body, &mut fresh, vars.len());
    PredExpr { vars, body }
}

fn preferred(i: usize) -> &'static str {
    const NAMES: [&str; 6] = ["u", "v", "w", "z", "x", "y"];
    NAMES[i % NAMES.len()]
}

fn tidy_binders(f: &Formula, fresh: &mut FreshNames, depth: usize) -> Formula {
    match f {
        Formula::True | Formula::False | Formula::Atom(..) => f.clone(),
        Formula::Not(a) => Formula::not(tidy_binders(a, fresh, depth)),
        Formula::And(v) => Formula::And(v.iter().map(|g| tidy_binders(g, &mut fresh.clone(), depth)).collect()),
        Formula::Or(v) => Formula::Or(v.iter().map(|g| tidy_binders(g, &mut fresh.clone(), depth)).collect()),
        Formula::Implies(a, b) => {
            Formula::implies(tidy_binders(a, &mut fresh.clone(), depth), tidy_binders(b, &mut fresh.clone(), depth))
        }
        Formula::Iff(a, b) => {
            Formula::iff(tidy_binders(a, &mut fresh.clone(), depth), tidy_binders(b, &mut fresh.clone(), depth))
        }
        Formula::Forall(v, b) | Formula::Exists(v, b) => {
            for n in b.free_vars() {
                if &n != v {
                    fresh.reserve(&n);
                }
            }
            let nv = fresh.fresh_like(preferred(depth));
            let body = b.subst_terms(&Subst::singleton(v.clone(), Term::Var(nv.clone())));
            let body = tidy_binders(&body, fresh, depth + 1);
            if matches!(f, Formula::Forall(..)) {
                Formula::forall(nv, body)
            } else {
                Formula::exists(nv, body)
            }
        }
        Formula::Gfp(g) => {
            for n in g.body.free_vars() {
                if !g.vars.contains(&n) {
                    fresh.reserve(&n);
                }
            }
            let mut inner = fresh.clone();
            let mut s = Subst::new();
            let mut vars = Vec::new();
            for (i, v) in g.vars.iter().enumerate() {
                let nv = inner.fresh_like(preferred(depth + i));
                s.bind(v.clone(), Term::Var(nv.clone()));
                vars.push(nv);
            }
            let body = g.body.subst_terms(&s);
            let body = tidy_binders(&body, &mut inner, depth + vars.len());
            Formula::gfp(g.pred.clone(), vars, body, g.args.clone())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::name;

    fn x_atom(t: Term) -> Formula {
        Formula::Atom(Head::PVar(name("X")), vec![t])
    }

    #[test]
    fn beta_reduction_of_negated_constraint() {
        // ¬X(c) with [X ← λu. ¬(u ≄ a)] gives ¬¬(c ≄ a), i.e. c ≄ a.
        let alpha = PredExpr::new(
            vec![name("u")],
            Formula::not(Formula::not(Formula::eq(Term::var("u"), Term::cnst("a")))),
        );
        let pi = PredSubst::singleton(name("X"), alpha);
        let out = apply_pred_subst(&Formula::not(x_atom(Term::cnst("c"))), &pi).unwrap();
        assert_eq!(simplify(&out).to_string(), "a != c");
    }

    #[test]
    fn reflexivity_instance() {
        let pi = PredSubst::singleton(name("X"), PredExpr::new(vec![name("u")], Formula::eq(Term::var("u"), Term::cnst("a"))));
        let out = apply_pred_subst(&x_atom(Term::cnst("a")), &pi).unwrap();
        assert_eq!(out, Formula::eq(Term::cnst("a"), Term::cnst("a")));
        assert_eq!(simplify(&out), Formula::True);
    }

    #[test]
    fn arity_mismatch_is_reported() {
        let pi = PredSubst::singleton(name("X"), PredExpr::bottom(2));
        assert!(apply_pred_subst(&x_atom(Term::cnst("a")), &pi).is_err());
    }

    #[test]
    fn parameters_are_not_captured() {
        // ∀v X(v) with [X ← λu. B(u, v)] where v is a parameter.
        let pi = PredSubst::singleton(
            name("X"),
            PredExpr::new(vec![name("u")], Formula::Atom(Head::Pred(name("B")), vec![Term::var("u"), Term::var("v")])),
        );
        let f = Formula::forall(name("v"), x_atom(Term::var("v")));
        let out = apply_pred_subst(&f, &pi).unwrap();
        match out {
            Formula::Forall(w, body) => {
                assert_ne!(&*w, "v");
                assert_eq!(
                    *body,
                    Formula::Atom(Head::Pred(name("B")), vec![Term::Var(w.clone()), Term::var("v")])
                );
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn composition_applies_left_then_right() {
        let tau = PredSubst::singleton(
            name("X"),
            PredExpr::new(vec![name("u")], Formula::Or(vec![x_atom(Term::var("u")), Formula::eq(Term::var("u"), Term::cnst("a"))])),
        );
        let ext = PredSubst::singleton(name("X"), PredExpr::bottom(1));
        let sigma = tau.then(&ext).unwrap().simplified();
        assert_eq!(sigma.get("X").unwrap().to_string(), "lambda u. u = a");
    }
}
