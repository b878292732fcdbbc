//! The Ackermann fast path: if `X` occurs negatively in exactly one clause
//! `¬X(ū) ∨ C(ū)` (distinct variables `ū`, `C` free of `X`) and only positively
//! elsewhere, then `[X ← λū. C(ū)]` is a witness; dually for the other polarity.

use std::collections::BTreeSet;

use crate::logic::{Formula, Literal, Name, PredExpr, PredSubst};
use crate::witness::Witness;

use super::Problem;

/// The Ackermann witness for `x`, or `None` when the pattern does not apply.
pub fn ackermann_witness(p: &Problem, x: &str) -> Option<Witness> {
    let clauses = p.all_clauses();
    for negative in [true, false] {
        let mut special = None;
        let mut ok = true;
        for (i, c) in clauses.iter().enumerate() {
            let pol = c.polarity_of(x);
            let has_special = if negative { pol.negative } else { pol.positive };
            if has_special {
                if special.is_some() {
                    ok = false;
                    break;
                }
                special = Some(i);
            }
        }
        let Some(i) = special.filter(|_| ok) else { continue };
        let c = &clauses[i];
        let x_lits: Vec<&Literal> = c.literals().iter().filter(|l| l.pvar_name().is_some_and(|n| &**n == x)).collect();
        if x_lits.len() != 1 {
            continue;
        }
        let designated = x_lits[0];
        let vars: Option<Vec<Name>> = designated.args.iter().map(|t| t.as_var().cloned()).collect();
        let Some(vars) = vars else { continue };
        if vars.iter().collect::<BTreeSet<_>>().len() != vars.len() {
            continue;
        }
        let rest: Vec<Literal> = c.literals().iter().filter(|l| *l != designated).cloned().collect();
        let mut extra: Vec<Name> = Vec::new();
        for l in &rest {
            l.collect_vars(&mut extra);
        }
        extra.retain(|v| !vars.contains(v));
        let body = Formula::forall_many(&extra, Formula::disjunction(&rest));
        let body = if negative { body } else { Formula::not(body) };
        let expr = PredExpr::new(vars, body).tidy();
        let name = p.xs.iter().find(|d| &*d.name == x).map(|d| d.name.clone()).unwrap_or_else(|| crate::logic::name(x));
        return Some(Witness { subst: PredSubst::singleton(name, expr), purdels: Vec::new() });
    }
    None
}
