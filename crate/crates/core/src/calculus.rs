//! The inference rules (constraint resolution, constraint factoring, constraint
//! elimination, paramodulation), variable elimination, bounded resolution
//! closures and the "purified in N" decision procedure.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::logic::{mgu, mgu_terms, rename_literals_apart, Clause, ClauseSet, Literal, Name, PointedClause, Term};
use crate::subsumption::{subsumes_l_velim_witness, velim_normal_form};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CalculusError {
    #[error("clauses are not resolvable on the designated literals")]
    NotResolvable,
    #[error("literals {0} and {1} cannot be factored")]
    InvalidFactor(usize, usize),
    #[error("selected literals are not constraint literals")]
    NotConstraint,
    #[error("no unifier")]
    NoUnifier,
    #[error("invalid position")]
    InvalidPosition,
    #[error("literal {0} is not a positive equality")]
    NotEquality(usize),
}

/// Position of a subterm inside a clause: literal index, argument index, then a
/// path below that argument (all zero-based).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Position {
    pub literal: usize,
    pub path: Vec<usize>,
}

impl Position {
    pub fn new(literal: usize, path: Vec<usize>) -> Self {
        Position { literal, path }
    }

    /// `lit.arg.sub…`, one-based.
    pub fn to_trace(&self) -> String {
        let mut s = (self.literal + 1).to_string();
        for p in &self.path {
            s.push('.');
            s.push_str(&(p + 1).to_string());
        }
        s
    }

    pub fn from_trace(s: &str) -> Option<Position> {
        let mut parts = s.split('.').map(|p| p.parse::<usize>().ok().filter(|&n| n >= 1).map(|n| n - 1));
        let literal = parts.next()??;
        let path: Option<Vec<usize>> = parts.collect();
        let path = path?;
        if path.is_empty() {
            return None;
        }
        Some(Position { literal, path })
    }
}

fn subterm_at<'a>(lits: &'a [Literal], pos: &Position) -> Option<&'a Term> {
    let lit = lits.get(pos.literal)?;
    let (first, rest) = pos.path.split_first()?;
    lit.args.get(*first)?.subterm(rest)
}

fn replace_at(lits: &[Literal], pos: &Position, by: &Term) -> Option<Vec<Literal>> {
    let mut out = lits.to_vec();
    let lit = out.get_mut(pos.literal)?;
    let (first, rest) = pos.path.split_first()?;
    let arg = lit.args.get(*first)?;
    lit.args[*first] = arg.replace_at(rest, by)?;
    Some(out)
}

/// Pairwise disequations `s̄ ≄ t̄`.
fn disequations(s: &[Term], t: &[Term]) -> Vec<Literal> {
    s.iter().zip(t).map(|(a, b)| Literal::neq(a.clone(), b.clone())).collect()
}

/// Constraint resolution of `p` with literal `j` of `q`:
/// `t̄ ≄ t̄′ ∨ C ∨ C′` where `p = L(t̄) ∨ C` and `q = L(t̄′)⊥ ∨ C′`.
pub fn resolve(p: &PointedClause, q: &Clause, j: usize) -> Result<Clause, CalculusError> {
    let d = p.designated();
    let ql = q.literals().get(j).ok_or(CalculusError::NotResolvable)?;
    if !ql.is_dual_kind(d) {
        return Err(CalculusError::NotResolvable);
    }
    let (qlits, _) = rename_literals_apart(q.literals(), &p.clause().var_set());
    let mut lits = disequations(&d.args, &qlits[j].args);
    lits.extend(p.rest());
    lits.extend(qlits.iter().enumerate().filter(|(i, _)| *i != j).map(|(_, l)| l.clone()));
    Ok(Clause::new(lits))
}

/// [`resolve`] on two pointed clauses.
pub fn constraint_resolve(p: &PointedClause, q: &PointedClause) -> Result<Clause, CalculusError> {
    resolve(p, q.clause(), q.index())
}

/// Indices of literals of `q` that are dual to the designated literal of `p`.
pub fn resolvable_literals(p: &PointedClause, q: &Clause) -> Vec<usize> {
    let d = p.designated();
    q.literals().iter().enumerate().filter(|(_, l)| l.is_dual_kind(d)).map(|(i, _)| i).collect()
}

/// Constraint factoring: keeps literal `i`, drops literal `j`, adds `t̄_i ≄ t̄_j`.
pub fn constraint_factor(c: &Clause, i: usize, j: usize) -> Result<Clause, CalculusError> {
    let lits = c.literals();
    let (Some(li), Some(lj)) = (lits.get(i), lits.get(j)) else {
        return Err(CalculusError::InvalidFactor(i, j));
    };
    if i == j || !li.same_kind(lj) {
        return Err(CalculusError::InvalidFactor(i, j));
    }
    let mut out = disequations(&li.args, &lj.args);
    out.extend(lits.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, l)| l.clone()));
    Ok(Clause::new(out))
}

/// Constraint elimination on the selected constraint literals: applies their mgu
/// to the remaining literals.
pub fn constraint_eliminate(c: &Clause, selection: &[usize]) -> Result<Clause, CalculusError> {
    let lits = c.literals();
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    for &i in selection {
        let l = lits.get(i).ok_or(CalculusError::NotConstraint)?;
        if !l.is_constraint() {
            return Err(CalculusError::NotConstraint);
        }
        lhs.push(l.args[0].clone());
        rhs.push(l.args[1].clone());
    }
    if selection.is_empty() {
        return Err(CalculusError::NotConstraint);
    }
    let sigma = mgu(&lhs, &rhs).ok_or(CalculusError::NoUnifier)?;
    let rest = lits.iter().enumerate().filter(|(k, _)| !selection.contains(k)).map(|(_, l)| l.apply(&sigma)).collect();
    Ok(Clause::new(rest))
}

/// Greedy constraint selection: constraints are added in canonical order as long
/// as the block stays unifiable.
pub fn greedy_constraint_selection(c: &Clause) -> Vec<usize> {
    let mut sel = Vec::new();
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    for (i, l) in c.literals().iter().enumerate() {
        if !l.is_constraint() {
            continue;
        }
        lhs.push(l.args[0].clone());
        rhs.push(l.args[1].clone());
        if mgu(&lhs, &rhs).is_some() {
            sel.push(i);
        } else {
            lhs.pop();
            rhs.pop();
        }
    }
    sel
}

/// Exhaustive variable elimination; the flag reports whether anything changed.
pub fn variable_eliminate(c: &Clause) -> (Clause, bool) {
    let out = velim_normal_form(c);
    let changed = out != *c;
    (out, changed)
}

/// Paramodulation from literal `eq_idx` of `eq_clause` (a positive equality,
/// used right-to-left when `flip`) into `target` at `pos`.
pub fn paramodulate(
    eq_clause: &Clause,
    eq_idx: usize,
    flip: bool,
    target: &Clause,
    pos: &Position,
) -> Result<Clause, CalculusError> {
    let eq = eq_clause.literals().get(eq_idx).ok_or(CalculusError::NotEquality(eq_idx))?;
    if !(eq.is_equality() && eq.positive) {
        return Err(CalculusError::NotEquality(eq_idx));
    }
    let (tlits, _) = rename_literals_apart(target.literals(), &eq_clause.var_set());
    let (s, t) = if flip { (&eq.args[1], &eq.args[0]) } else { (&eq.args[0], &eq.args[1]) };
    let r = subterm_at(&tlits, pos).ok_or(CalculusError::InvalidPosition)?;
    let sigma = mgu_terms(s, r).ok_or(CalculusError::NoUnifier)?;
    let replaced = replace_at(&tlits, pos, t).ok_or(CalculusError::InvalidPosition)?;
    let mut lits: Vec<Literal> = eq_clause.without(eq_idx).iter().map(|l| l.apply(&sigma)).collect();
    lits.extend(replaced.iter().map(|l| l.apply(&sigma)));
    Ok(Clause::new(lits))
}

/// A paramodulant together with the data needed to replay it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Paramodulant {
    pub eq_idx: usize,
    pub flip: bool,
    pub pos: Position,
    pub conclusion: Clause,
}

/// Options for enumerating paramodulants.
#[derive(Clone, Copy, Debug, Default)]
pub struct ParamodOptions {
    /// Allow rewriting subterms that are variables.
    pub into_variables: bool,
    /// Allow the rewritten side `s` of the equation to be a variable.
    pub from_variables: bool,
}

/// All paramodulants from `eq_clause` into `target` (both orientations).
pub fn paramodulants(eq_clause: &Clause, target: &Clause, opts: ParamodOptions) -> Vec<Paramodulant> {
    let mut out = Vec::new();
    let (tlits, _) = rename_literals_apart(target.literals(), &eq_clause.var_set());
    for (ei, eq) in eq_clause.literals().iter().enumerate() {
        if !(eq.is_equality() && eq.positive) {
            continue;
        }
        for flip in [false, true] {
            let s = if flip { &eq.args[1] } else { &eq.args[0] };
            if s.is_var() && !opts.from_variables {
                continue;
            }
            for (li, l) in tlits.iter().enumerate() {
                for (ai, a) in l.args.iter().enumerate() {
                    for sub in a.positions() {
                        let r = a.subterm(&sub).expect("position from positions()");
                        if r.is_var() && !opts.into_variables {
                            continue;
                        }
                        if mgu_terms(s, r).is_none() {
                            continue;
                        }
                        let mut path = vec![ai];
                        path.extend(sub);
                        let pos = Position::new(li, path);
                        if let Ok(c) = paramodulate(eq_clause, ei, flip, target, &pos) {
                            out.push(Paramodulant { eq_idx: ei, flip, pos, conclusion: c });
                        }
                    }
                }
            }
        }
    }
    out
}

/// `Res_P^{≤depth}(seed)`: closure of `seed` under resolution with `p`, without
/// any redundancy elimination.
pub fn res_p_bounded(p: &PointedClause, seed: &ClauseSet, depth: usize) -> ClauseSet {
    let mut all = seed.clone();
    let mut frontier: Vec<Clause> = seed.iter().cloned().collect();
    for _ in 0..depth {
        let mut next = Vec::new();
        for q in &frontier {
            for j in resolvable_literals(p, q) {
                if let Ok(r) = resolve(p, q, j) {
                    if all.insert(r.clone()) {
                        next.push(r);
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    all
}

/// One entry of a purification certificate: the resolvent of `p` with literal
/// `literal` of `n[clause]` is `⊴_{L⊥}^{ve}`-subsumed by `n[subsumer]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PurificationEntry {
    pub clause: usize,
    pub literal: usize,
    pub resolvent: Clause,
    pub subsumer: usize,
}

/// Decides whether `p` is purified in `n` (which should not contain `p`).
///
/// Returns the certificate (one entry per resolvable literal, using the first
/// subsumer found) or `None`.
pub fn is_purified(p: &PointedClause, n: &[Clause]) -> Option<Vec<PurificationEntry>> {
    let lbot = p.designated().negated();
    let mut cert = Vec::new();
    for (qi, q) in n.iter().enumerate() {
        for j in resolvable_literals(p, q) {
            let r = resolve(p, q, j).ok()?;
            let s = n.iter().position(|s| subsumes_l_velim_witness(s, &r, &lbot).is_some())?;
            cert.push(PurificationEntry { clause: qi, literal: j, resolvent: r, subsumer: s });
        }
    }
    Some(cert)
}

/// All subsumers of each resolvent (used by the acyclicity analysis).
pub fn purification_candidates(p: &PointedClause, n: &[Clause]) -> Option<Vec<(usize, usize, Vec<usize>)>> {
    let lbot = p.designated().negated();
    let mut out = Vec::new();
    for (qi, q) in n.iter().enumerate() {
        for j in resolvable_literals(p, q) {
            let r = resolve(p, q, j).ok()?;
            let subs: Vec<usize> =
                n.iter().enumerate().filter(|(_, s)| subsumes_l_velim_witness(s, &r, &lbot).is_some()).map(|(i, _)| i).collect();
            if subs.is_empty() {
                return None;
            }
            out.push((qi, j, subs));
        }
    }
    Some(out)
}

/// Polarity for extended purity deletion of `x`: `Some(true)` if every clause
/// mentioning `x` has a positive occurrence, `Some(false)` for negative
/// (positive preferred on ties), `None` otherwise.
pub fn ext_purity_check<'a, I: IntoIterator<Item = &'a Clause>>(n: I, x: &Name) -> Option<bool> {
    let mut all_pos = true;
    let mut all_neg = true;
    for c in n {
        let p = c.polarity_of(x);
        if p.is_empty() {
            continue;
        }
        all_pos &= p.positive;
        all_neg &= p.negative;
    }
    if all_pos {
        Some(true)
    } else if all_neg {
        Some(false)
    } else {
        None
    }
}

/// Variables of a literal list (helper for callers renaming apart).
pub fn lits_var_set(lits: &[Literal]) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    lits.iter().for_each(|l| l.var_set(&mut out));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &str) -> Term {
        Term::var(x)
    }
    fn c(x: &str) -> Term {
        Term::cnst(x)
    }
    fn x(pos: bool, t: Term) -> Literal {
        Literal::pvar(pos, "X", vec![t])
    }
    fn b(s: Term, t: Term) -> Literal {
        Literal::pred(true, "B", vec![s, t])
    }
    fn e(pos: bool, s: Term, t: Term) -> Literal {
        Literal::pred(pos, "E", vec![s, t])
    }
    fn cl(lits: Vec<Literal>) -> Clause {
        Clause::new(lits)
    }
    fn main_clause3() -> Clause {
        cl(vec![b(v("u"), v("v")), x(false, v("u")), x(true, v("v"))])
    }

    #[test]
    fn resolution_examples() {
        let p = PointedClause::new(vec![x(true, c("a"))], 0);
        let q = PointedClause::new(vec![x(false, c("c"))], 0);
        assert_eq!(constraint_resolve(&p, &q).unwrap(), cl(vec![Literal::neq(c("a"), c("c"))]));
        let three = main_clause3();
        let j = resolvable_literals(&p, &three);
        assert_eq!(j, vec![1]);
        let r = resolve(&p, &three, 1).unwrap();
        assert_eq!(r, cl(vec![Literal::neq(c("a"), v("u")), b(v("u"), v("v")), x(true, v("v"))]));
        let pu = PointedClause::new(vec![x(true, v("u"))], 0);
        let qv = PointedClause::new(vec![x(false, v("v"))], 0);
        let r = constraint_resolve(&pu, &qv).unwrap();
        assert_eq!(r.len(), 1);
        assert!(r.literals()[0].is_constraint());
        assert!(!r.literals()[0].args[0].eq(&r.literals()[0].args[1]));
    }

    #[test]
    fn factoring_examples() {
        let c1 = cl(vec![x(true, v("u")), x(true, c("a"))]);
        let (i, j) = (
            c1.literals().iter().position(|l| l.args[0].is_var()).unwrap(),
            c1.literals().iter().position(|l| !l.args[0].is_var()).unwrap(),
        );
        assert_eq!(constraint_factor(&c1, i, j).unwrap(), cl(vec![Literal::neq(v("u"), c("a")), x(true, v("u"))]));
        let mixed = cl(vec![x(true, v("u")), x(false, c("a"))]);
        assert!(constraint_factor(&mixed, 0, 1).is_err());
        let bb = cl(vec![b(v("u"), v("v")), b(v("v"), v("u"))]);
        let f = constraint_factor(&bb, 0, 1).unwrap();
        assert_eq!(f, cl(vec![Literal::neq(v("u"), v("v")), Literal::neq(v("v"), v("u")), b(v("u"), v("v"))]));
    }

    #[test]
    fn constraint_elimination_examples() {
        let c1 = cl(vec![Literal::neq(c("a"), v("u")), b(v("u"), v("v"))]);
        let sel = greedy_constraint_selection(&c1);
        assert_eq!(constraint_eliminate(&c1, &sel).unwrap(), cl(vec![b(c("a"), v("v"))]));
        let c2 = cl(vec![Literal::neq(c("a"), c("a")), b(v("u"), v("v"))]);
        assert_eq!(constraint_eliminate(&c2, &greedy_constraint_selection(&c2)).unwrap(), cl(vec![b(v("u"), v("v"))]));
        let c3 = cl(vec![Literal::neq(c("a"), c("c")), b(v("u"), v("v"))]);
        assert_eq!(constraint_eliminate(&c3, &[1]), Err(CalculusError::NoUnifier));
        assert_eq!(constraint_eliminate(&c3, &[0]), Err(CalculusError::NotConstraint));
    }

    #[test]
    fn variable_elimination_examples() {
        let five = cl(vec![Literal::neq(c("a"), v("u")), b(v("u"), v("v")), x(true, v("v"))]);
        assert_eq!(variable_eliminate(&five), (cl(vec![b(c("a"), v("v")), x(true, v("v"))]), true));
        let fv = Term::app("f", vec![v("v")]);
        let stuck = cl(vec![Literal::neq(v("v"), fv), b(v("v"), c("a"))]);
        assert!(!variable_eliminate(&stuck).1);
    }

    #[test]
    fn paramodulation_examples() {
        let ab = cl(vec![Literal::eq(c("a"), c("b"))]);
        let target = cl(vec![e(false, c("a"), v("v"))]);
        let out = paramodulate(&ab, 0, false, &target, &Position::new(0, vec![0])).unwrap();
        assert_eq!(out, cl(vec![e(false, c("b"), v("v"))]));

        let closure = cl(vec![
            Literal::eq(v("v"), c("a1")),
            Literal::eq(v("v"), c("a2")),
            Literal::eq(v("v"), c("a3")),
        ]);
        let i1 = closure.literals().iter().position(|l| l.args.contains(&c("a1"))).unwrap();
        let lit = &closure.literals()[i1];
        let flip = lit.args[1] == c("a1");
        let out = paramodulate(&closure, i1, flip, &cl(vec![e(false, c("a2"), c("a1"))]), &Position::new(0, vec![1])).unwrap();
        assert_eq!(
            out,
            cl(vec![Literal::eq(v("v"), c("a2")), Literal::eq(v("v"), c("a3")), e(false, c("a2"), v("v"))])
        );

        let aa = cl(vec![Literal::eq(c("a"), c("a"))]);
        let a = cl(vec![Literal::pred(true, "A", vec![c("a")])]);
        assert_eq!(paramodulate(&aa, 0, false, &a, &Position::new(0, vec![0])).unwrap(), a);
    }

    #[test]
    fn bounded_closures() {
        let p = PointedClause::new(vec![x(true, c("a"))], 0);
        let seed: ClauseSet = [cl(vec![x(false, c("c"))])].into_iter().collect();
        assert_eq!(res_p_bounded(&p, &seed, 0), seed);
        let one = res_p_bounded(&p, &seed, 5);
        assert_eq!(one.len(), 2);
        assert!(one.contains(&cl(vec![Literal::neq(c("a"), c("c"))])));

        let three = main_clause3();
        let p3 = PointedClause::of(&three, 1);
        assert!(!p3.designated().positive);
        let seed: ClauseSet = [cl(vec![x(true, c("c"))])].into_iter().collect();
        for k in 0..5 {
            assert_eq!(res_p_bounded(&p3, &seed, k).len(), k + 1);
        }
    }

    #[test]
    fn purification_examples() {
        let one = cl(vec![b(c("a"), v("v"))]);
        let three = main_clause3();
        let four = cl(vec![x(false, c("c"))]);
        let six = cl(vec![Literal::neq(c("a"), c("c"))]);
        let p21 = PointedClause::new(vec![x(true, c("a"))], 0);
        assert!(is_purified(&p21, &[one.clone(), three.clone(), four.clone(), six]).is_some());
        assert!(is_purified(&p21, &[one.clone(), three.clone(), four.clone()]).is_none());
        let p32 = PointedClause::of(&three, 1);
        assert!(!p32.designated().positive);
        let two = cl(vec![x(true, c("a"))]);
        assert!(is_purified(&p32, &[one, two, four]).is_some());
    }

    #[test]
    fn extended_purity() {
        let three = main_clause3();
        let xs = crate::logic::name("X");
        let n = [cl(vec![b(c("a"), v("v"))]), cl(vec![Literal::neq(c("a"), c("c"))]), three, cl(vec![x(false, c("c"))])];
        assert_eq!(ext_purity_check(&n, &xs), Some(false));
        let tie = [cl(vec![x(true, c("a"))]), cl(vec![x(false, c("a"))])];
        assert_eq!(ext_purity_check(&tie, &xs), None);
        let both = [cl(vec![x(true, c("a")), x(false, c("b"))])];
        assert_eq!(ext_purity_check(&both, &xs), Some(true));
        assert_eq!(ext_purity_check(&[cl(vec![b(c("a"), v("v"))])], &xs), Some(true));
    }
}
