//! Literals: polarity, head (predicate symbol, predicate variable or equality) and arguments.

use std::collections::BTreeSet;
use std::fmt;

use super::subst::Subst;
use super::term::{Name, Term};

/// The head of an atom.
///
/// The variant order fixes the canonical literal order inside clauses:
/// ordinary predicates first, then predicate variables, then equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Head {
    Pred(Name),
    PVar(Name),
    Eq,
}

impl Head {
    pub fn name(&self) -> Option<&Name> {
        match self {
            Head::Pred(n) | Head::PVar(n) => Some(n),
            Head::Eq => None,
        }
    }

    pub fn is_pvar(&self) -> bool {
        matches!(self, Head::PVar(_))
    }
}

impl fmt::Display for Head {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Head::Pred(n) | Head::PVar(n) => f.write_str(n),
            Head::Eq => f.write_str("="),
        }
    }
}

/// A signed atom. Negative equality literals are the constraint literals `s ≄ t`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Literal {
    pub head: Head,
    pub positive: bool,
    pub args: Vec<Term>,
}

impl Literal {
    pub fn new(positive: bool, head: Head, args: Vec<Term>) -> Self {
        Literal { head, positive, args }
    }

    pub fn pred(positive: bool, p: &str, args: Vec<Term>) -> Self {
        Literal::new(positive, Head::Pred(super::name(p)), args)
    }

    pub fn pvar(positive: bool, x: &str, args: Vec<Term>) -> Self {
        Literal::new(positive, Head::PVar(super::name(x)), args)
    }

    pub fn eq(s: Term, t: Term) -> Self {
        Literal::new(true, Head::Eq, vec![s, t])
    }

    pub fn neq(s: Term, t: Term) -> Self {
        Literal::new(false, Head::Eq, vec![s, t])
    }

    pub fn negated(&self) -> Self {
        Literal { positive: !self.positive, ..self.clone() }
    }

    pub fn is_equality(&self) -> bool {
        self.head == Head::Eq
    }

    /// A negative equality `s ≄ t`.
    pub fn is_constraint(&self) -> bool {
        self.head == Head::Eq && !self.positive
    }

    pub fn pvar_name(&self) -> Option<&Name> {
        match &self.head {
            Head::PVar(x) => Some(x),
            _ => None,
        }
    }

    /// True iff the head is one of the listed predicate variables.
    pub fn is_x_literal(&self, xs: &[Name]) -> bool {
        self.pvar_name().is_some_and(|x| xs.contains(x))
    }

    /// Same head and same polarity: `self` is an `l`-literal.
    pub fn same_kind(&self, l: &Literal) -> bool {
        self.head == l.head && self.positive == l.positive && self.args.len() == l.args.len()
    }

    /// Same head, opposite polarity.
    pub fn is_dual_kind(&self, l: &Literal) -> bool {
        self.head == l.head && self.positive != l.positive && self.args.len() == l.args.len()
    }

    /// Syntactic equality, treating equality atoms as unordered.
    pub fn equiv(&self, other: &Literal) -> bool {
        if self == other {
            return true;
        }
        self.head == Head::Eq
            && other.head == Head::Eq
            && self.positive == other.positive
            && self.args.len() == 2
            && other.args.len() == 2
            && self.args[0] == other.args[1]
            && self.args[1] == other.args[0]
    }

    /// `self` is the complement of `other` (modulo equality symmetry).
    pub fn complements(&self, other: &Literal) -> bool {
        self.negated().equiv(other)
    }

    pub fn apply(&self, s: &Subst) -> Literal {
        Literal { head: self.head.clone(), positive: self.positive, args: s.apply_all(&self.args) }
    }

    pub fn collect_vars(&self, out: &mut Vec<Name>) {
        self.args.iter().for_each(|a| a.collect_vars(out));
    }

    pub fn var_set(&self, out: &mut BTreeSet<Name>) {
        self.args.iter().for_each(|a| a.var_set(out));
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    /// Non-logical symbol count: the predicate symbol (equality is logical) plus all term symbols.
    pub fn nonlogical_size(&self) -> usize {
        let head = usize::from(self.head != Head::Eq);
        head + self.args.iter().map(Term::symbol_count).sum::<usize>()
    }

    /// The equality orientation that reads the arguments right to left.
    pub fn flipped(&self) -> Literal {
        let mut l = self.clone();
        if l.head == Head::Eq && l.args.len() == 2 {
            l.args.swap(0, 1);
        }
        l
    }

    pub fn to_problem_string(&self) -> String {
        self.render(true)
    }

    fn render(&self, mark_vars: bool) -> String {
        let term = |t: &Term| if mark_vars { t.to_problem_string() } else { t.to_string() };
        match &self.head {
            Head::Eq => {
                let op = if self.positive { "=" } else { "!=" };
                format!("{} {} {}", term(&self.args[0]), op, term(&self.args[1]))
            }
            h => {
                let mut s = String::new();
                if !self.positive {
                    s.push('~');
                }
                s.push_str(&h.to_string());
                if !self.args.is_empty() {
                    s.push('(');
                    s.push_str(&self.args.iter().map(term).collect::<Vec<_>>().join(", "));
                    s.push(')');
                }
                s
            }
        }
    }

    /// Renaming-invariant description used to sort literals before variable numbering.
    pub(crate) fn shape_key(&self) -> (Head, bool, String) {
        let mut s = String::new();
        for a in &self.args {
            a.shape(&mut s);
            s.push('|');
        }
        (self.head.clone(), self.positive, s)
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rendering() {
        let l = Literal::pvar(false, "X", vec![Term::var("u")]);
        assert_eq!(l.to_string(), "~X(u)");
        assert_eq!(l.to_problem_string(), "~X(?u)");
        let e = Literal::neq(Term::var("u"), Term::cnst("a"));
        assert_eq!(e.to_problem_string(), "?u != a");
        assert!(e.is_constraint());
    }

    #[test]
    fn equality_symmetry() {
        let a = Literal::eq(Term::cnst("a"), Term::var("u"));
        let b = Literal::eq(Term::var("u"), Term::cnst("a"));
        assert!(a.equiv(&b));
        assert!(a.complements(&b.negated()));
    }

    #[test]
    fn sizes() {
        let l = Literal::pred(true, "B", vec![Term::cnst("a"), Term::var("v")]);
        assert_eq!(l.nonlogical_size(), 3);
        assert_eq!(Literal::neq(Term::cnst("a"), Term::cnst("c")).nonlogical_size(), 2);
    }
}
