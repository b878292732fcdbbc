//! Clausal normal form: negation normal form, Skolemization and distribution.

use crate::logic::{simplify, Clause, Formula, FreshNames, Head, Literal, Name, Subst, Term};
use crate::subsumption::is_tautology;

use super::VerifyError;

/// Negation normal form without `→`/`↔`; `positive = false` negates.
fn nnf(phi: &Formula, positive: bool) -> Result<Formula, VerifyError> {
    Ok(match phi {
        Formula::True => if positive { Formula::True } else { Formula::False },
        Formula::False => if positive { Formula::False } else { Formula::True },
        Formula::Atom(..) => if positive { phi.clone() } else { Formula::not(phi.clone()) },
        Formula::Not(f) => nnf(f, !positive)?,
        Formula::And(fs) | Formula::Or(fs) => {
            let conj = matches!(phi, Formula::And(_)) == positive;
            let parts = fs.iter().map(|f| nnf(f, positive)).collect::<Result<Vec<_>, _>>()?;
            if conj { Formula::And(parts) } else { Formula::Or(parts) }
        }
        Formula::Implies(a, b) => {
            let parts = vec![nnf(a, !positive)?, nnf(b, positive)?];
            if positive { Formula::Or(parts) } else { Formula::And(parts) }
        }
        Formula::Iff(a, b) => {
            // (a → b) ∧ (b → a), negated: (a ∧ ¬b) ∨ (b ∧ ¬a)
            let imp1 = Formula::implies((**a).clone(), (**b).clone());
            let imp2 = Formula::implies((**b).clone(), (**a).clone());
            nnf(&Formula::And(vec![imp1, imp2]), positive)?
        }
        Formula::Forall(v, f) => {
            let body = nnf(f, positive)?;
            if positive { Formula::forall(v.clone(), body) } else { Formula::exists(v.clone(), body) }
        }
        Formula::Exists(v, f) => {
            let body = nnf(f, positive)?;
            if positive { Formula::exists(v.clone(), body) } else { Formula::forall(v.clone(), body) }
        }
        Formula::Gfp(_) => return Err(VerifyError::GfpNotClausifiable),
    })
}

/// Skolemizes an NNF formula, renaming universal variables apart and dropping
/// the universal quantifiers.
fn skolemize(phi: &Formula, univ: &mut Vec<Name>, fresh: &mut FreshNames) -> Formula {
    match phi {
        Formula::And(fs) => Formula::And(fs.iter().map(|f| skolemize(f, univ, fresh)).collect()),
        Formula::Or(fs) => Formula::Or(fs.iter().map(|f| skolemize(f, univ, fresh)).collect()),
        Formula::Forall(v, f) => {
            let nv = fresh.fresh("x");
            let body = f.subst_terms(&Subst::singleton(v.clone(), Term::Var(nv.clone())));
            univ.push(nv);
            let out = skolemize(&body, univ, fresh);
            univ.pop();
            out
        }
        Formula::Exists(v, f) => {
            let sk = fresh.fresh("sk");
            let t = Term::App(sk, univ.iter().map(|u| Term::Var(u.clone())).collect());
            let body = f.subst_terms(&Subst::singleton(v.clone(), t));
            skolemize(&body, univ, fresh)
        }
        other => other.clone(),
    }
}

fn cnf(phi: &Formula) -> Vec<Vec<Literal>> {
    match phi {
        Formula::True => vec![],
        Formula::False => vec![vec![]],
        Formula::Atom(h, args) => vec![vec![Literal::new(true, h.clone(), args.clone())]],
        Formula::Not(f) => match &**f {
            Formula::Atom(h, args) => vec![vec![Literal::new(false, h.clone(), args.clone())]],
            _ => unreachable!("negation normal form"),
        },
        Formula::And(fs) => fs.iter().flat_map(cnf).collect(),
        Formula::Or(fs) => {
            let mut acc: Vec<Vec<Literal>> = vec![vec![]];
            for f in fs {
                let part = cnf(f);
                let mut next = Vec::with_capacity(acc.len() * part.len());
                for a in &acc {
                    for p in &part {
                        let mut c = a.clone();
                        c.extend(p.iter().cloned());
                        next.push(c);
                    }
                }
                acc = next;
            }
            acc
        }
        _ => unreachable!("quantifiers removed by skolemization"),
    }
}

/// Clausal form of `phi`, with Skolem symbols fresh with respect to `avoid`.
pub fn clausify_avoiding(phi: &Formula, avoid: &mut FreshNames) -> Result<Vec<Clause>, VerifyError> {
    let simplified = simplify(phi);
    let n = nnf(&simplified, true)?;
    let sk = skolemize(&n, &mut Vec::new(), avoid);
    let mut out: Vec<Clause> = Vec::new();
    for lits in cnf(&sk) {
        let c = Clause::new(lits);
        if !is_tautology(&c) && !out.contains(&c) {
            out.push(c);
        }
    }
    Ok(out)
}

/// Clausal form of `phi` (equisatisfiable; equivalent when no existential
/// quantifier needs a Skolem symbol).
pub fn clausify(phi: &Formula) -> Result<Vec<Clause>, VerifyError> {
    let mut fresh = FreshNames::avoiding(formula_names(phi));
    clausify_avoiding(phi, &mut fresh)
}

/// Every symbol and variable name used in `phi`.
pub fn formula_names(phi: &Formula) -> Vec<String> {
    let mut names: Vec<String> = phi.all_var_names().iter().map(|n| n.to_string()).collect();
    let (funcs, preds) = phi.symbols();
    names.extend(funcs.iter().map(|(n, _)| n.to_string()));
    names.extend(preds.iter().map(|(n, _)| n.to_string()));
    phi.visit(&mut |f| {
        if let Formula::Atom(Head::PVar(x), _) = f {
            names.push(x.to_string());
        }
    });
    names
}
