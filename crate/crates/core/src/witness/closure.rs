//! Clause sets over fresh constants: the local resolution closure `ℓRes_P`, the
//! bottom-up iterates `B_P^k`, and their reading as predicate expressions.

use std::collections::BTreeSet;

use crate::calculus::{resolvable_literals, resolve};
use crate::logic::{name, rename_literals_apart, Clause, ClauseSet, Formula, Literal, Name, PointedClause, PredExpr, Term};
use crate::subsumption::{is_tautology, subsumes, velim_normal_form};

use super::WitnessError;

/// The fresh constants `c̄` used as λ-handles (never valid user identifiers).
pub fn fresh_constants(arity: usize) -> Vec<Term> {
    (0..arity).map(|i| Term::cnst(&format!("_c{i}"))).collect()
}

/// `L(c̄)⊥` for the designated literal of `p`.
fn dual_at(p: &PointedClause, cs: &[Term]) -> Literal {
    let d = p.designated();
    Literal::new(!d.positive, d.head.clone(), cs.to_vec())
}

/// Adds `c` to `set` unless it is a tautology or subsumed; removes clauses it subsumes.
fn insert_reduced(set: &mut Vec<Clause>, c: Clause) -> bool {
    if is_tautology(&c) || set.iter().any(|e| subsumes(e, &c)) {
        return false;
    }
    set.retain(|e| !subsumes(&c, e));
    set.push(c);
    true
}

/// `Res_P^{<ω}(L(c̄)⊥)` up to redundancy, or `BudgetExceeded` if it does not
/// stabilise within `budget` inferences.
pub fn lres(p: &PointedClause, budget: usize) -> Result<ClauseSet, WitnessError> {
    let cs = fresh_constants(p.designated().args.len());
    let mut set: Vec<Clause> = vec![Clause::unit(dual_at(p, &cs))];
    let mut queue: Vec<Clause> = set.clone();
    let mut inferences = 0;
    while let Some(q) = queue.pop() {
        if !set.contains(&q) {
            continue;
        }
        for j in resolvable_literals(p, &q) {
            inferences += 1;
            if inferences > budget {
                return Err(WitnessError::BudgetExceeded { budget });
            }
            let r = velim_normal_form(&resolve(p, &q, j).expect("resolvable literal"));
            if insert_reduced(&mut set, r.clone()) {
                queue.push(r);
            }
        }
    }
    Ok(set.into_iter().collect())
}

/// Splits `p` into `(t̄, C, [t̄₁ … t̄ₚ])`: the designated arguments, the literals
/// that are not `L⊥`-literals, and the arguments of the `L⊥`-literals.
fn decompose(p: &PointedClause) -> (Vec<Term>, Vec<Literal>, Vec<Vec<Term>>) {
    let d = p.designated();
    let mut rest = Vec::new();
    let mut duals = Vec::new();
    for l in p.rest() {
        if l.is_dual_kind(d) {
            duals.push(l.args.clone());
        } else {
            rest.push(l);
        }
    }
    (d.args.clone(), rest, duals)
}

fn replace_terms(t: &Term, from: &[Term], to: &[Term]) -> Term {
    if let Some(i) = from.iter().position(|f| f == t) {
        return to[i].clone();
    }
    match t {
        Term::Var(_) => t.clone(),
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| replace_terms(a, from, to)).collect()),
    }
}

fn replace_in_literal(l: &Literal, from: &[Term], to: &[Term]) -> Literal {
    Literal::new(l.positive, l.head.clone(), l.args.iter().map(|a| replace_terms(a, from, to)).collect())
}

/// The iterate `B_P^k(c̄)` as a clause set (`B_P^0 = {⊥}`).
pub fn b_k(p: &PointedClause, k: usize) -> ClauseSet {
    let cs = fresh_constants(p.designated().args.len());
    let (t, c, duals) = decompose(p);
    let mut current: Vec<Clause> = vec![Clause::empty()];
    for _ in 0..k {
        let mut next: Vec<Clause> = vec![Clause::unit(dual_at(p, &cs))];
        // Every choice of one clause of the previous iterate per L⊥-literal.
        let mut choices: Vec<Vec<Literal>> = vec![{
            let mut base: Vec<Literal> =
                cs.iter().zip(&t).map(|(ci, ti)| Literal::neq(ci.clone(), ti.clone())).collect();
            base.extend(c.iter().cloned());
            base
        }];
        for ti in &duals {
            let mut extended = Vec::new();
            for partial in &choices {
                for r in &current {
                    let mut avoid: BTreeSet<Name> = p.clause().var_set();
                    for l in partial {
                        l.var_set(&mut avoid);
                    }
                    let (renamed, _) = rename_literals_apart(r.literals(), &avoid);
                    let mut lits = partial.clone();
                    lits.extend(renamed.iter().map(|l| replace_in_literal(l, &cs, ti)));
                    extended.push(lits);
                }
            }
            choices = extended;
        }
        for lits in choices {
            insert_reduced(&mut next, velim_normal_form(&Clause::new(lits)));
        }
        current = next;
    }
    current.into_iter().collect()
}

/// Reads a clause set over `c̄` as `λū. ⋀_R ∀v̄ R[c̄ ← ū]`.
pub fn clause_set_to_expr(set: &ClauseSet, arity: usize) -> PredExpr {
    let cs = fresh_constants(arity);
    let vars: Vec<Name> = (0..arity).map(|i| name(&format!("_x{i}"))).collect();
    let var_terms: Vec<Term> = vars.iter().map(|v| Term::Var(v.clone())).collect();
    let parts: Vec<Formula> = set
        .iter()
        .map(|c| {
            let lits: Vec<Literal> = c.literals().iter().map(|l| replace_in_literal(l, &cs, &var_terms)).collect();
            Formula::forall_many(&c.vars(), Formula::disjunction(&lits))
        })
        .collect();
    let body = match parts.len() {
        0 => Formula::True,
        1 => parts.into_iter().next().expect("one part"),
        _ => Formula::And(parts),
    };
    PredExpr::new(vars, body)
}

/// `α_{P,Y} = λū. L(ū)⊥ ∧ ∀v̄(ū ≄ t̄(v̄) ∨ C(v̄) ∨ ⋁ Y(t̄ᵢ(v̄)))`, simplified.
pub fn make_alpha(p: &PointedClause, y: &Name) -> PredExpr {
    let arity = p.designated().args.len();
    let vars: Vec<Name> = (0..arity).map(|i| name(&format!("_x{i}"))).collect();
    let var_terms: Vec<Term> = vars.iter().map(|v| Term::Var(v.clone())).collect();
    let (t, c, duals) = decompose(p);
    let mut disj: Vec<Literal> = var_terms.iter().zip(&t).map(|(u, ti)| Literal::neq(u.clone(), ti.clone())).collect();
    disj.extend(c);
    let mut parts: Vec<Formula> = disj.iter().map(Formula::literal).collect();
    for ti in duals {
        parts.push(Formula::Atom(crate::logic::Head::PVar(y.clone()), ti));
    }
    let inner = match parts.len() {
        0 => Formula::False,
        1 => parts.pop().expect("one part"),
        _ => Formula::Or(parts),
    };
    let body = Formula::And(vec![
        Formula::literal(&dual_at(p, &var_terms)),
        Formula::forall_many(&p.clause().vars(), inner),
    ]);
    PredExpr::new(vars, body).simplified()
}

/// `gfp_Y α = λw̄. (gfp_{Y,ū} α(ū))(w̄)`, simplified (collapses when `Y ∉ α`).
pub fn gfp_expr(alpha: &PredExpr, y: &Name) -> PredExpr {
    let outer: Vec<Name> = (0..alpha.arity()).map(|i| name(&format!("_w{i}"))).collect();
    let args: Vec<Term> = outer.iter().map(|v| Term::Var(v.clone())).collect();
    PredExpr::new(outer, Formula::gfp(y.clone(), alpha.vars.clone(), alpha.body.clone(), args)).simplified()
}
