//! First-order formulas extended with greatest-fixpoint applications.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};

use super::clause::{Clause, Polarities};
use super::literal::{Head, Literal};
use super::subst::Subst;
use super::term::{FreshNames, Name, Term};

/// A formula. Predicate-variable applications `X(t̄)` are atoms with a [`Head::PVar`] head.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Formula {
    True,
    False,
    Atom(Head, Vec<Term>),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(Name, Box<Formula>),
    Exists(Name, Box<Formula>),
    Gfp(Box<GfpApp>),
}

/// `(gfp_{Y,ū} body)(t̄)`: the greatest fixpoint of `λū. body` in `Y`, applied to `t̄`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct GfpApp {
    pub pred: Name,
    pub vars: Vec<Name>,
    pub body: Formula,
    pub args: Vec<Term>,
}

impl Formula {
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn forall(v: Name, f: Formula) -> Formula {
        Formula::Forall(v, Box::new(f))
    }

    pub fn exists(v: Name, f: Formula) -> Formula {
        Formula::Exists(v, Box::new(f))
    }

    /// Universal closure over the given variables (outermost first).
    pub fn forall_many(vars: &[Name], f: Formula) -> Formula {
        vars.iter().rev().fold(f, |acc, v| Formula::forall(v.clone(), acc))
    }

    pub fn eq(s: Term, t: Term) -> Formula {
        Formula::Atom(Head::Eq, vec![s, t])
    }

    pub fn gfp(pred: Name, vars: Vec<Name>, body: Formula, args: Vec<Term>) -> Formula {
        Formula::Gfp(Box::new(GfpApp { pred, vars, body, args }))
    }

    pub fn literal(l: &Literal) -> Formula {
        let atom = Formula::Atom(l.head.clone(), l.args.clone());
        if l.positive {
            atom
        } else {
            Formula::not(atom)
        }
    }

    /// The disjunction of a literal list, without quantifiers.
    pub fn disjunction(lits: &[Literal]) -> Formula {
        match lits.len() {
            0 => Formula::False,
            1 => Formula::literal(&lits[0]),
            _ => Formula::Or(lits.iter().map(Formula::literal).collect()),
        }
    }

    /// The universal closure of a clause.
    pub fn from_clause(c: &Clause) -> Formula {
        Formula::forall_many(&c.vars(), Formula::disjunction(c.literals()))
    }

    /// The conjunction of the universal closures of the clauses.
    pub fn from_clauses<'a, I: IntoIterator<Item = &'a Clause>>(cs: I) -> Formula {
        let parts: Vec<Formula> = cs.into_iter().map(Formula::from_clause).collect();
        match parts.len() {
            0 => Formula::True,
            1 => parts.into_iter().next().expect("one part"),
            _ => Formula::And(parts),
        }
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::True | Formula::False | Formula::Atom(..))
    }

    /// Free first-order variables.
    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.free_vars_into(&mut Vec::new(), &mut out);
        out
    }

    fn free_vars_into(&self, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
        let terms = |ts: &[Term], bound: &Vec<Name>, out: &mut BTreeSet<Name>| {
            let mut vs = BTreeSet::new();
            ts.iter().for_each(|t| t.var_set(&mut vs));
            out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
        };
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(_, args) => terms(args, bound, out),
            Formula::Not(a) => a.free_vars_into(bound, out),
            Formula::And(v) | Formula::Or(v) => v.iter().for_each(|f| f.free_vars_into(bound, out)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.free_vars_into(bound, out);
                b.free_vars_into(bound, out);
            }
            Formula::Forall(v, f) | Formula::Exists(v, f) => {
                bound.push(v.clone());
                f.free_vars_into(bound, out);
                bound.pop();
            }
            Formula::Gfp(g) => {
                terms(&g.args, bound, out);
                let n = bound.len();
                bound.extend(g.vars.iter().cloned());
                g.body.free_vars_into(bound, out);
                bound.truncate(n);
            }
        }
    }

    /// Every first-order variable name occurring free or bound.
    pub fn all_var_names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.all_names_into(&mut out);
        out
    }

    fn all_names_into(&self, out: &mut BTreeSet<Name>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(_, args) => args.iter().for_each(|t| t.var_set(out)),
            Formula::Not(a) => a.all_names_into(out),
            Formula::And(v) | Formula::Or(v) => v.iter().for_each(|f| f.all_names_into(out)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.all_names_into(out);
                b.all_names_into(out);
            }
            Formula::Forall(v, f) | Formula::Exists(v, f) => {
                out.insert(v.clone());
                f.all_names_into(out);
            }
            Formula::Gfp(g) => {
                g.args.iter().for_each(|t| t.var_set(out));
                out.extend(g.vars.iter().cloned());
                g.body.all_names_into(out);
            }
        }
    }

    /// Free predicate variables (those not bound by an enclosing fixpoint).
    pub fn pvars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.pvars_into(&mut Vec::new(), &mut out);
        out
    }

    fn pvars_into(&self, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
        match self {
            Formula::Atom(Head::PVar(x), _) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            Formula::True | Formula::False | Formula::Atom(..) => {}
            Formula::Not(a) => a.pvars_into(bound, out),
            Formula::And(v) | Formula::Or(v) => v.iter().for_each(|f| f.pvars_into(bound, out)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.pvars_into(bound, out);
                b.pvars_into(bound, out);
            }
            Formula::Forall(_, f) | Formula::Exists(_, f) => f.pvars_into(bound, out),
            Formula::Gfp(g) => {
                bound.push(g.pred.clone());
                g.body.pvars_into(bound, out);
                bound.pop();
            }
        }
    }

    /// All predicate-variable names, including fixpoint-bound ones.
    pub fn all_pvar_names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Atom(Head::PVar(x), _) => {
                out.insert(x.clone());
            }
            Formula::Gfp(g) => {
                out.insert(g.pred.clone());
            }
            _ => {}
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit(&self, f: &mut dyn FnMut(&Formula)) {
        f(self);
        match self {
            Formula::True | Formula::False | Formula::Atom(..) => {}
            Formula::Not(a) => a.visit(f),
            Formula::And(v) | Formula::Or(v) => v.iter().for_each(|x| x.visit(f)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Formula::Forall(_, b) | Formula::Exists(_, b) => b.visit(f),
            Formula::Gfp(g) => g.body.visit(f),
        }
    }

    /// Function symbols (with arity) and predicate symbols (with arity) occurring in the formula.
    pub fn symbols(&self) -> (Vec<(Name, usize)>, Vec<(Name, usize)>) {
        let mut funs = Vec::new();
        let mut preds: Vec<(Name, usize)> = Vec::new();
        self.visit(&mut |f| {
            let args: &[Term] = match f {
                Formula::Atom(h, args) => {
                    if let Head::Pred(p) = h {
                        if !preds.iter().any(|(q, n)| q == p && *n == args.len()) {
                            preds.push((p.clone(), args.len()));
                        }
                    }
                    args
                }
                Formula::Gfp(g) => &g.args,
                _ => &[],
            };
            args.iter().for_each(|t| t.collect_functions(&mut funs));
        });
        (funs, preds)
    }

    pub fn contains_gfp(&self) -> bool {
        let mut found = false;
        self.visit(&mut |f| found |= matches!(f, Formula::Gfp(_)));
        found
    }

    /// Polarities of the free occurrences of predicate variable `x`
    /// (`→` and `↔` are unfolded into `¬`/`∨`).
    pub fn polarity_of(&self, x: &str) -> Polarities {
        match self {
            Formula::True | Formula::False => Polarities::none(),
            Formula::Atom(Head::PVar(y), _) if &**y == x => Polarities { positive: true, negative: false },
            Formula::Atom(..) => Polarities::none(),
            Formula::Not(a) => a.polarity_of(x).flip(),
            Formula::And(v) | Formula::Or(v) => v.iter().fold(Polarities::none(), |p, f| p.union(f.polarity_of(x))),
            Formula::Implies(a, b) => a.polarity_of(x).flip().union(b.polarity_of(x)),
            Formula::Iff(a, b) => {
                let p = a.polarity_of(x).union(b.polarity_of(x));
                if p.is_empty() {
                    p
                } else {
                    Polarities { positive: true, negative: true }
                }
            }
            Formula::Forall(_, f) | Formula::Exists(_, f) => f.polarity_of(x),
            Formula::Gfp(g) => {
                if &*g.pred == x {
                    Polarities::none()
                } else {
                    g.body.polarity_of(x)
                }
            }
        }
    }

    /// Capture-avoiding simultaneous substitution of terms for free variables.
    pub fn subst_terms(&self, s: &Subst) -> Formula {
        if s.is_empty() {
            return self.clone();
        }
        let mut range_vars = BTreeSet::new();
        for (_, t) in s.iter() {
            t.var_set(&mut range_vars);
        }
        self.subst_rec(s, &range_vars)
    }

    fn subst_rec(&self, s: &Subst, range_vars: &BTreeSet<Name>) -> Formula {
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Atom(h, args) => Formula::Atom(h.clone(), s.apply_all(args)),
            Formula::Not(a) => Formula::not(a.subst_rec(s, range_vars)),
            Formula::And(v) => Formula::And(v.iter().map(|f| f.subst_rec(s, range_vars)).collect()),
            Formula::Or(v) => Formula::Or(v.iter().map(|f| f.subst_rec(s, range_vars)).collect()),
            Formula::Implies(a, b) => Formula::implies(a.subst_rec(s, range_vars), b.subst_rec(s, range_vars)),
            Formula::Iff(a, b) => Formula::iff(a.subst_rec(s, range_vars), b.subst_rec(s, range_vars)),
            Formula::Forall(v, f) | Formula::Exists(v, f) => {
                let is_forall = matches!(self, Formula::Forall(..));
                let (v2, body) = self.subst_under_binder(v, f, s, range_vars);
                if is_forall {
                    Formula::forall(v2, body)
                } else {
                    Formula::exists(v2, body)
                }
            }
            Formula::Gfp(g) => {
                let args = s.apply_all(&g.args);
                let mut inner = Subst::new();
                for (v, t) in s.iter() {
                    if !g.vars.contains(v) {
                        inner.bind(v.clone(), t.clone());
                    }
                }
                let mut vars = g.vars.clone();
                let mut body = g.body.clone();
                let body_free = g.body.free_vars();
                let mut fresh = FreshNames::avoiding(
                    g.body.all_var_names().iter().chain(range_vars.iter()).chain(g.vars.iter()).map(|n| n.to_string()),
                );
                let mut rename = Subst::new();
                for u in vars.iter_mut() {
                    let needed = range_vars.contains(u) && inner.iter().any(|(w, _)| body_free.contains(w));
                    if needed {
                        let nu = fresh.fresh_like(u);
                        rename.bind(u.clone(), Term::Var(nu.clone()));
                        *u = nu;
                    }
                }
                if !rename.is_empty() {
                    body = body.subst_terms(&rename);
                }
                let body = if inner.is_empty() { body } else { body.subst_terms(&inner) };
                Formula::gfp(g.pred.clone(), vars, body, args)
            }
        }
    }

    fn subst_under_binder(&self, v: &Name, f: &Formula, s: &Subst, range_vars: &BTreeSet<Name>) -> (Name, Formula) {
        let mut inner = Subst::new();
        for (w, t) in s.iter() {
            if w != v {
                inner.bind(w.clone(), t.clone());
            }
        }
        if inner.is_empty() {
            return (v.clone(), f.clone());
        }
        let body_free = f.free_vars();
        let relevant = inner.iter().any(|(w, _)| body_free.contains(w));
        if !relevant {
            return (v.clone(), f.clone());
        }
        if range_vars.contains(v) {
            let mut fresh = FreshNames::avoiding(
                f.all_var_names().iter().chain(range_vars.iter()).chain(s.domain()).map(|n| n.to_string()),
            );
            let nv = fresh.fresh_like(v);
            let renamed = f.subst_terms(&Subst::singleton(v.clone(), Term::Var(nv.clone())));
            (nv, renamed.subst_terms(&inner))
        } else {
            (v.clone(), f.subst_terms(&inner))
        }
    }

    /// Witness-size measure: every connective, quantifier (with its variable),
    /// fixpoint binder, predicate and term-symbol occurrence counts once.
    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::False => 1,
            Formula::Atom(_, args) => 1 + args.iter().map(Term::symbol_count).sum::<usize>(),
            Formula::Not(a) => 1 + a.size(),
            Formula::And(v) | Formula::Or(v) => v.len().saturating_sub(1) + v.iter().map(Formula::size).sum::<usize>(),
            Formula::Implies(a, b) | Formula::Iff(a, b) => 1 + a.size() + b.size(),
            Formula::Forall(_, f) | Formula::Exists(_, f) => 2 + f.size(),
            Formula::Gfp(g) => {
                2 + g.vars.len() + g.body.size() + g.args.iter().map(Term::symbol_count).sum::<usize>()
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Text rendering: `~`, `/\`, `\/`, `->`, `<->`, `forall v.`, `exists v.`,
// `gfp Y u. body @ (t)`, `u = a`, `u != a`, `true`, `false`.
// ---------------------------------------------------------------------------

fn is_eq_atom(f: &Formula) -> bool {
    match f {
        Formula::Atom(Head::Eq, _) => true,
        Formula::Not(a) => matches!(**a, Formula::Atom(Head::Eq, _)),
        _ => false,
    }
}

fn is_tight(f: &Formula) -> bool {
    match f {
        Formula::True | Formula::False | Formula::Atom(..) | Formula::Gfp(_) => true,
        Formula::Not(a) => is_tight(a) || matches!(**a, Formula::Atom(Head::Eq, _)),
        _ => false,
    }
}

fn is_quantifier(f: &Formula) -> bool {
    matches!(f, Formula::Forall(..) | Formula::Exists(..))
}

fn write_operand(out: &mut String, f: &Formula, last: bool) {
    let bare = (is_tight(f) && !is_eq_atom(f)) || (last && is_quantifier(f));
    if bare {
        write_formula(out, f);
    } else {
        out.push('(');
        write_formula(out, f);
        out.push(')');
    }
}

fn write_terms(out: &mut String, ts: &[Term]) {
    out.push('(');
    out.push_str(&ts.iter().map(Term::to_string).collect::<Vec<_>>().join(", "));
    out.push(')');
}

fn write_formula(out: &mut String, f: &Formula) {
    match f {
        Formula::True => out.push_str("true"),
        Formula::False => out.push_str("false"),
        Formula::Atom(Head::Eq, args) => {
            out.push_str(&format!("{} = {}", args[0], args[1]));
        }
        Formula::Atom(h, args) => {
            out.push_str(&h.to_string());
            if !args.is_empty() {
                write_terms(out, args);
            }
        }
        Formula::Not(a) => match &**a {
            Formula::Atom(Head::Eq, args) => out.push_str(&format!("{} != {}", args[0], args[1])),
            inner => {
                out.push('~');
                if is_tight(inner) && !is_eq_atom(inner) {
                    write_formula(out, inner);
                } else {
                    out.push('(');
                    write_formula(out, inner);
                    out.push(')');
                }
            }
        },
        Formula::And(v) | Formula::Or(v) => {
            if v.is_empty() {
                out.push_str(if matches!(f, Formula::And(_)) { "true" } else { "false" });
                return;
            }
            let op = if matches!(f, Formula::And(_)) { " /\\ " } else { " \\/ " };
            for (i, g) in v.iter().enumerate() {
                if i > 0 {
                    out.push_str(op);
                }
                write_operand(out, g, i + 1 == v.len());
            }
        }
        Formula::Implies(a, b) => {
            write_operand(out, a, false);
            out.push_str(" -> ");
            write_operand(out, b, true);
        }
        Formula::Iff(a, b) => {
            write_operand(out, a, false);
            out.push_str(" <-> ");
            write_operand(out, b, true);
        }
        Formula::Forall(..) | Formula::Exists(..) => {
            let is_forall = matches!(f, Formula::Forall(..));
            out.push_str(if is_forall { "forall" } else { "exists" });
            let mut cur = f;
            loop {
                match cur {
                    Formula::Forall(v, b) if is_forall => {
                        out.push(' ');
                        out.push_str(v);
                        cur = b;
                    }
                    Formula::Exists(v, b) if !is_forall => {
                        out.push(' ');
                        out.push_str(v);
                        cur = b;
                    }
                    _ => break,
                }
            }
            out.push_str(". ");
            write_formula(out, cur);
        }
        Formula::Gfp(g) => {
            out.push_str("gfp ");
            out.push_str(&g.pred);
            for v in &g.vars {
                out.push(' ');
                out.push_str(v);
            }
            out.push_str(". ");
            write_formula(out, &g.body);
            out.push_str(" @ ");
            write_terms(out, &g.args);
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_formula(&mut s, self);
        f.write_str(&s)
    }
}

impl Serialize for Formula {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}
