//! Equivalence-preserving formula simplification.
//!
//! Rewrites are sound over every (non-empty) first-order domain: constant
//! folding, flattening, duplicate and complement detection, miniscoping,
//! one-point rules for (dis)equalities and elimination of fixpoints whose body
//! does not mention the fixpoint variable.

use std::collections::BTreeSet;

use super::formula::{Formula, GfpApp};
use super::literal::Head;
use super::subst::Subst;
use super::term::{Name, Term};

const MAX_PASSES: usize = 32;

/// Simplifies until a fixpoint is reached (bounded by a pass limit).
pub fn simplify(f: &Formula) -> Formula {
    let mut cur = f.clone();
    for _ in 0..MAX_PASSES {
        let next = simp(&cur);
        if next == cur {
            return next;
        }
        cur = next;
    }
    cur
}

fn simp(f: &Formula) -> Formula {
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Atom(Head::Eq, args) if args.len() == 2 => {
            if args[0] == args[1] {
                Formula::True
            } else if args[1] < args[0] {
                Formula::Atom(Head::Eq, vec![args[1].clone(), args[0].clone()])
            } else {
                f.clone()
            }
        }
        Formula::Atom(..) => f.clone(),
        Formula::Not(a) => negate(simp(a)),
        Formula::And(v) => make_and(v.iter().map(simp).collect()),
        Formula::Or(v) => make_or(v.iter().map(simp).collect()),
        Formula::Implies(a, b) => {
            let (a, b) = (simp(a), simp(b));
            match (&a, &b) {
                (Formula::True, _) => b,
                (Formula::False, _) | (_, Formula::True) => Formula::True,
                (_, Formula::False) => negate(a),
                _ if a == b => Formula::True,
                _ => Formula::implies(a, b),
            }
        }
        Formula::Iff(a, b) => {
            let (a, b) = (simp(a), simp(b));
            match (&a, &b) {
                _ if a == b => Formula::True,
                (Formula::True, _) => b,
                (_, Formula::True) => a,
                (Formula::False, _) => negate(b),
                (_, Formula::False) => negate(a),
                _ => Formula::iff(a, b),
            }
        }
        Formula::Forall(v, b) => quantify(true, v, simp(b)),
        Formula::Exists(v, b) => quantify(false, v, simp(b)),
        Formula::Gfp(g) => {
            let body = simp(&g.body);
            if !body.pvars().contains(&g.pred) {
                let mut s = Subst::new();
                for (u, t) in g.vars.iter().zip(&g.args) {
                    s.bind(u.clone(), t.clone());
                }
                return simp(&body.subst_terms(&s));
            }
            Formula::Gfp(Box::new(GfpApp { pred: g.pred.clone(), vars: g.vars.clone(), body, args: g.args.clone() }))
        }
    }
}

/// `¬a` for an already simplified `a`.
fn negate(a: Formula) -> Formula {
    match a {
        Formula::True => Formula::False,
        Formula::False => Formula::True,
        Formula::Not(inner) => *inner,
        // De Morgan on a junction of literals removes one negation.
        Formula::And(parts) if parts.iter().all(is_literal) => simp(&Formula::Or(parts.into_iter().map(negate).collect())),
        Formula::Or(parts) if parts.iter().all(is_literal) => simp(&Formula::And(parts.into_iter().map(negate).collect())),
        other => Formula::not(other),
    }
}

fn is_literal(f: &Formula) -> bool {
    f.is_atomic() || matches!(f, Formula::Not(g) if g.is_atomic())
}

fn is_complement(a: &Formula, b: &Formula) -> bool {
    matches!(a, Formula::Not(x) if **x == *b) || matches!(b, Formula::Not(x) if **x == *a)
}

fn make_and(parts: Vec<Formula>) -> Formula {
    junction(true, parts)
}

fn make_or(parts: Vec<Formula>) -> Formula {
    junction(false, parts)
}

/// Builds a flattened, deduplicated conjunction (`conj`) or disjunction.
fn junction(conj: bool, parts: Vec<Formula>) -> Formula {
    let (unit, zero) = if conj { (Formula::True, Formula::False) } else { (Formula::False, Formula::True) };
    let mut flat: Vec<Formula> = Vec::new();
    let mut stack: Vec<Formula> = parts.into_iter().rev().collect();
    while let Some(p) = stack.pop() {
        match p {
            Formula::And(v) if conj => stack.extend(v.into_iter().rev()),
            Formula::Or(v) if !conj => stack.extend(v.into_iter().rev()),
            p if p == unit => {}
            p if p == zero => return zero,
            p => {
                if flat.iter().any(|q| is_complement(q, &p)) {
                    return zero;
                }
                if !flat.contains(&p) {
                    flat.push(p);
                }
            }
        }
    }
    // Literals first, compound parts after (stable otherwise).
    flat.sort_by_key(|f| !matches!(f, Formula::Atom(..)) && !matches!(f, Formula::Not(g) if g.is_atomic()));
    match flat.len() {
        0 => unit,
        1 => flat.pop().expect("one element"),
        _ if conj => Formula::And(flat),
        _ => Formula::Or(flat),
    }
}

fn mentions(f: &Formula, v: &Name) -> bool {
    f.free_vars().contains(v)
}

/// Builds `∀v body` (`univ`) or `∃v body` for a simplified body.
fn quantify(univ: bool, v: &Name, body: Formula) -> Formula {
    if !mentions(&body, v) {
        return body;
    }
    // Collect the chain of same-kind quantifiers below `v`; they commute with it.
    let mut chain = vec![v.clone()];
    let mut matrix = body;
    loop {
        match matrix {
            Formula::Forall(w, b) if univ => {
                chain.push(w);
                matrix = *b;
            }
            Formula::Exists(w, b) if !univ => {
                chain.push(w);
                matrix = *b;
            }
            other => {
                matrix = other;
                break;
            }
        }
    }
    // One-point rule: ∀x(x ≄ t ∨ φ) ≡ φ[x ← t] and ∃x(x ≃ t ∧ φ) ≡ φ[x ← t].
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..chain.len() {
            if let Some(next) = one_point(univ, &chain[i], &matrix) {
                chain.remove(i);
                matrix = simp(&next);
                changed = true;
                break;
            }
        }
    }
    chain.retain(|x| mentions(&matrix, x));
    if chain.is_empty() {
        return matrix;
    }
    // Miniscoping: move the quantifiers inside the junction where sound.
    let split_conj = univ; // ∀ distributes over ∧, ∃ over ∨
    let parts: Option<Vec<Formula>> = match &matrix {
        Formula::And(ps) | Formula::Or(ps) => Some(ps.clone()),
        _ => None,
    };
    if let Some(ps) = parts {
        let is_conj = matches!(matrix, Formula::And(_));
        if is_conj == split_conj {
            // Distribute the whole chain over the junction.
            let distributed: Vec<Formula> = ps.iter().map(|p| wrap_chain(univ, &chain, p.clone())).collect();
            let distributed = junction(is_conj, distributed);
            let kept = wrap_chain_raw(univ, &chain, matrix.clone());
            return if distributed.size() <= kept.size() { distributed } else { kept };
        }
        // Pull out parts that do not mention any chain variable.
        let (inside, outside): (Vec<Formula>, Vec<Formula>) =
            ps.into_iter().partition(|p| chain.iter().any(|x| mentions(p, x)));
        if !outside.is_empty() {
            let inner = wrap_chain(univ, &chain, junction(is_conj, inside));
            let mut all = outside;
            all.push(inner);
            return junction(is_conj, all);
        }
    }
    wrap_chain_raw(univ, &chain, matrix)
}

/// Quantifies `f` over the chain, dropping vacuous binders and re-simplifying.
fn wrap_chain(univ: bool, chain: &[Name], f: Formula) -> Formula {
    let used: Vec<Name> = chain.iter().filter(|x| mentions(&f, x)).cloned().collect();
    if used.is_empty() {
        return f;
    }
    let mut out = f;
    for x in used[1..].iter().rev() {
        out = if univ { Formula::forall(x.clone(), out) } else { Formula::exists(x.clone(), out) };
    }
    quantify(univ, &used[0], out)
}

fn wrap_chain_raw(univ: bool, chain: &[Name], f: Formula) -> Formula {
    chain.iter().rev().fold(f, |acc, x| if univ { Formula::forall(x.clone(), acc) } else { Formula::exists(x.clone(), acc) })
}

/// Finds `x ≄ t` (universal) or `x ≃ t` (existential) with `x ∉ vars(t)` among
/// the disjuncts (resp. conjuncts) of `matrix` and returns the instantiated rest.
fn one_point(univ: bool, x: &Name, matrix: &Formula) -> Option<Formula> {
    let single = [matrix.clone()];
    let parts: &[Formula] = match matrix {
        Formula::Or(ps) if univ => ps,
        Formula::And(ps) if !univ => ps,
        _ => &single,
    };
    for (i, p) in parts.iter().enumerate() {
        let atom = if univ {
            match p {
                Formula::Not(a) => &**a,
                _ => continue,
            }
        } else {
            p
        };
        let Formula::Atom(Head::Eq, args) = atom else { continue };
        let t = if args[0].as_var() == Some(x) && !args[1].occurs(x) {
            &args[1]
        } else if args[1].as_var() == Some(x) && !args[0].occurs(x) {
            &args[0]
        } else {
            continue;
        };
        let rest: Vec<Formula> = parts.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, q)| q.clone()).collect();
        let rest = if univ { make_or(rest) } else { make_and(rest) };
        return Some(rest.subst_terms(&Subst::singleton(x.clone(), t.clone())));
    }
    None
}

/// Variables bound anywhere in `f` (used by tests and callers that rename).
pub fn bound_vars(f: &Formula) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    f.visit(&mut |g| match g {
        Formula::Forall(v, _) | Formula::Exists(v, _) => {
            out.insert(v.clone());
        }
        Formula::Gfp(h) => out.extend(h.vars.iter().cloned()),
        _ => {}
    });
    out
}

/// True iff `t` is a variable not occurring in any of `ts`.
pub fn is_fresh_var(t: &Term, ts: &[Term]) -> bool {
    t.as_var().is_some_and(|v| ts.iter().all(|s| !s.occurs(v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::name;

    fn v(x: &str) -> Term {
        Term::var(x)
    }
    fn c(x: &str) -> Term {
        Term::cnst(x)
    }
    fn b(s: Term, t: Term) -> Formula {
        Formula::Atom(Head::Pred(name("B")), vec![s, t])
    }

    #[test]
    fn constants_and_flattening() {
        let f = Formula::And(vec![Formula::True, Formula::And(vec![b(v("u"), c("a")), Formula::True])]);
        assert_eq!(simplify(&f), b(v("u"), c("a")));
        let g = Formula::Or(vec![b(v("u"), c("a")), Formula::not(b(v("u"), c("a")))]);
        assert_eq!(simplify(&g), Formula::True);
    }

    #[test]
    fn equalities_are_oriented_and_reflexive_ones_vanish() {
        assert_eq!(simplify(&Formula::eq(c("a"), v("u"))).to_string(), "u = a");
        assert_eq!(simplify(&Formula::not(Formula::eq(c("a"), c("a")))), Formula::False);
    }

    #[test]
    fn one_point_rule_universal() {
        // ∀v (v ≄ a ∨ B(u, v))  ≡  B(u, a)
        let f = Formula::forall(
            name("v"),
            Formula::Or(vec![Formula::not(Formula::eq(v("v"), c("a"))), b(v("u"), v("v"))]),
        );
        assert_eq!(simplify(&f), b(v("u"), c("a")));
    }

    #[test]
    fn one_point_rule_through_chain() {
        // ∀v ∀w (w ≄ v ∨ B(v, w))  ≡  ∀v B(v, v)
        let f = Formula::forall(
            name("v"),
            Formula::forall(name("w"), Formula::Or(vec![Formula::not(Formula::eq(v("w"), v("v"))), b(v("v"), v("w"))])),
        );
        assert_eq!(simplify(&f).to_string(), "forall v. B(v, v)");
    }

    #[test]
    fn miniscoping_pulls_out_independent_parts() {
        // ∀v (u = a ∨ B(u, v))  ≡  u = a ∨ ∀v B(u, v)
        let f = Formula::forall(name("v"), Formula::Or(vec![Formula::eq(v("u"), c("a")), b(v("u"), v("v"))]));
        assert_eq!(simplify(&f).to_string(), "(u = a) \\/ forall v. B(u, v)");
    }

    #[test]
    fn gfp_without_recursion_is_unfolded() {
        let f = Formula::gfp(name("Y"), vec![name("u")], b(v("u"), c("a")), vec![c("d")]);
        assert_eq!(simplify(&f), b(c("d"), c("a")));
    }

    #[test]
    fn existential_one_point() {
        let f = Formula::exists(name("v"), Formula::And(vec![Formula::eq(v("v"), c("a")), b(v("v"), v("u"))]));
        assert_eq!(simplify(&f), b(c("a"), v("u")));
    }
}
