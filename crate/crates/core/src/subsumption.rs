//! Tautologies, subsumption `⊴`, `L`-injective subsumption `⊴_L`, variable
//! elimination `→_ve` and the composite relation `⊴_L^ve`.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::rc::Rc;

use crate::logic::{match_terms, subst_from_map, Clause, Literal, Name, PointedClause, Subst, Term};

/// True iff the clause contains a literal together with its complement.
pub fn is_tautology(c: &Clause) -> bool {
    let lits = c.literals();
    lits.iter().enumerate().any(|(i, l)| lits[i + 1..].iter().any(|m| l.complements(m)))
}

/// `c ⊴ e`: some substitution `σ` has `cσ ⊆ e`.
pub fn subsumes(c: &Clause, e: &Clause) -> bool {
    find_matcher(c.literals(), e.literals(), None).is_some()
}

/// `s ⊴_L e`: some `σ` with `sσ ⊆ e` that never identifies two distinct
/// `l`-literals (same head and polarity as `l`) of `s`.
pub fn subsumes_l(s: &Clause, e: &Clause, l: &Literal) -> bool {
    find_matcher(s.literals(), e.literals(), Some(l)).is_some()
}

/// `s ⊴_L^ve e`: `s ⊴_L e′` for some `e′` with `e →_ve* e′`.
pub fn subsumes_l_velim(s: &Clause, e: &Clause, l: &Literal) -> bool {
    if !kinds_available(s, e) {
        return false;
    }
    velim_closure(e).iter().any(|e2| subsumes_l(s, e2, l))
}

/// Like [`subsumes_l_velim`] but returns the matcher and the `→_ve` variant used.
pub fn subsumes_l_velim_witness(s: &Clause, e: &Clause, l: &Literal) -> Option<(Subst, Clause)> {
    if !kinds_available(s, e) {
        return None;
    }
    velim_closure(e)
        .iter()
        .find_map(|e2| find_matcher(s.literals(), e2.literals(), Some(l)).map(|m| (m, e2.clone())))
}

/// Every non-constraint literal kind of `s` must occur in `e` (constraints may
/// still be produced or consumed by `→_ve`, so they are not prefiltered).
fn kinds_available(s: &Clause, e: &Clause) -> bool {
    s.literals().iter().filter(|l| !l.is_constraint()).all(|l| e.literals().iter().any(|m| m.same_kind(l)))
}

/// Searches for a matcher `σ` with `pattern σ ⊆ target` (equality read symmetrically).
///
/// With `injective_on = Some(l)`, distinct pattern literals of `l`'s kind must be
/// mapped to distinct target literals.
pub fn find_matcher(pattern: &[Literal], target: &[Literal], injective_on: Option<&Literal>) -> Option<Subst> {
    // Most constrained pattern literals first: fewest candidate targets, then largest.
    let mut order: Vec<(usize, Vec<usize>)> = pattern
        .iter()
        .enumerate()
        .map(|(i, p)| (i, target.iter().enumerate().filter(|(_, t)| t.same_kind(p)).map(|(j, _)| j).collect()))
        .collect();
    if order.iter().any(|(_, cands)| cands.is_empty()) {
        return None;
    }
    order.sort_by_key(|(i, cands)| (cands.len(), std::cmp::Reverse(pattern[*i].nonlogical_size())));
    let mut used = vec![false; target.len()];
    let mut sigma = BTreeMap::new();
    if search(pattern, target, &order, 0, injective_on, &mut used, &mut sigma) {
        Some(subst_from_map(sigma))
    } else {
        None
    }
}

fn search(
    pattern: &[Literal],
    target: &[Literal],
    order: &[(usize, Vec<usize>)],
    depth: usize,
    inj: Option<&Literal>,
    used: &mut [bool],
    sigma: &mut BTreeMap<Name, Term>,
) -> bool {
    let Some((pi, cands)) = order.get(depth) else { return true };
    let p = &pattern[*pi];
    let injective = inj.is_some_and(|l| p.same_kind(l));
    for &j in cands {
        if injective && used[j] {
            continue;
        }
        let t = &target[j];
        let orientations: &[bool] = if p.is_equality() { &[false, true] } else { &[false] };
        for &flip in orientations {
            let mut trial = sigma.clone();
            let ok = if flip {
                match_terms(&p.args, &[t.args[1].clone(), t.args[0].clone()], &mut trial)
            } else {
                match_terms(&p.args, &t.args, &mut trial)
            };
            if !ok {
                continue;
            }
            if injective {
                used[j] = true;
            }
            if search(pattern, target, order, depth + 1, inj, used, &mut trial) {
                *sigma = trial;
                return true;
            }
            if injective {
                used[j] = false;
            }
        }
    }
    false
}

/// One `→_ve` step on literal `i`, if it is `v ≄ t` with `v` not a proper subterm of `t`.
///
/// Returns the remaining literals with `v ↦ t` applied (not yet canonicalized).
pub fn velim_step(lits: &[Literal], i: usize) -> Option<Vec<Literal>> {
    let l = &lits[i];
    if !l.is_constraint() {
        return None;
    }
    let binding = eliminable_binding(&l.args[0], &l.args[1]).or_else(|| eliminable_binding(&l.args[1], &l.args[0]))?;
    let s = match binding {
        Some((v, t)) => Subst::singleton(v, t),
        None => Subst::new(),
    };
    Some(lits.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, m)| m.apply(&s)).collect())
}

/// `Some(None)` for `v ≄ v`, `Some(Some((v, t)))` for an eliminable `v ≄ t`.
fn eliminable_binding(a: &Term, b: &Term) -> Option<Option<(Name, Term)>> {
    let v = a.as_var()?;
    if b.as_var() == Some(v) {
        return Some(None);
    }
    if b.occurs(v) {
        return None;
    }
    Some(Some((v.clone(), b.clone())))
}

thread_local! {
    static VELIM_MEMO: RefCell<HashMap<Clause, Rc<Vec<Clause>>>> = RefCell::new(HashMap::new());
}

const VELIM_MEMO_LIMIT: usize = 50_000;

/// All clauses reachable by `→_ve*`, including `c` itself (memoized).
pub fn velim_closure(c: &Clause) -> Rc<Vec<Clause>> {
    if !c.literals().iter().any(Literal::is_constraint) {
        return Rc::new(vec![c.clone()]);
    }
    if let Some(hit) = VELIM_MEMO.with(|m| m.borrow().get(c).cloned()) {
        return hit;
    }
    let mut seen: BTreeSet<Clause> = BTreeSet::new();
    let mut out = Vec::new();
    let mut queue = vec![c.clone()];
    seen.insert(c.clone());
    while let Some(cur) = queue.pop() {
        for i in 0..cur.len() {
            if let Some(lits) = velim_step(cur.literals(), i) {
                let next = Clause::new(lits);
                if seen.insert(next.clone()) {
                    queue.push(next);
                }
            }
        }
        out.push(cur);
    }
    out.sort();
    let rc = Rc::new(out);
    VELIM_MEMO.with(|m| {
        let mut m = m.borrow_mut();
        if m.len() >= VELIM_MEMO_LIMIT {
            m.clear();
        }
        m.insert(c.clone(), rc.clone());
    });
    rc
}

/// `→_ve*` closure of a pointed clause; the designated literal is never consumed.
pub fn velim_closure_pointed(p: &PointedClause) -> Vec<PointedClause> {
    let mut seen: BTreeSet<PointedClause> = BTreeSet::new();
    let mut queue = vec![p.clone()];
    seen.insert(p.clone());
    let mut out = Vec::new();
    while let Some(cur) = queue.pop() {
        let lits = cur.clause().literals();
        for i in 0..lits.len() {
            if i == cur.index() {
                continue;
            }
            if let Some(rest) = velim_step(lits, i) {
                let idx = if i < cur.index() { cur.index() - 1 } else { cur.index() };
                let next = PointedClause::new(rest, idx);
                if seen.insert(next.clone()) {
                    queue.push(next);
                }
            }
        }
        out.push(cur);
    }
    out.sort();
    out
}

/// Exhaustive `→_ve` normal form, always eliminating the first eligible
/// constraint in canonical order (deterministic).
pub fn velim_normal_form(c: &Clause) -> Clause {
    let mut cur = c.clone();
    loop {
        let step = (0..cur.len()).find_map(|i| velim_step(cur.literals(), i));
        match step {
            Some(lits) => cur = Clause::new(lits),
            None => return cur,
        }
    }
}
