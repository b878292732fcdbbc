//! The preprocessing fixpoint: variable elimination, tautology and subsumption
//! deletion, extended purity deletion and non-redundant constraint factors.

use crate::calculus::{constraint_factor, ext_purity_check};
use crate::logic::Clause;
use crate::subsumption::{is_tautology, subsumes, velim_normal_form};

use super::derivation::{ClauseId, Derivation, RedReason, Step};

const MAX_ROUNDS: usize = 32;

/// Runs the preprocessing rules to a fixpoint (bounded), recording every action.
pub fn preprocess(d: &mut Derivation) {
    let xs = d.x_names();
    for _ in 0..MAX_ROUNDS {
        let mut changed = false;

        // Variable elimination.
        let snapshot: Vec<(ClauseId, Clause)> = d.current().iter().map(|(k, c)| (*k, c.clone())).collect();
        for (id, c) in snapshot {
            if velim_normal_form(&c) != c {
                let out = d.fresh_id();
                d.push(Step::VarElim { c: id, out }).expect("variable elimination applies");
                changed = true;
            }
        }

        // Tautologies.
        let tauts: Vec<ClauseId> = d.current().iter().filter(|(_, c)| is_tautology(c)).map(|(k, _)| *k).collect();
        for id in tauts {
            d.push(Step::RedDel { c: id, reason: RedReason::Tautology }).expect("tautology");
            changed = true;
        }

        changed |= backward_subsumption(d, None, None);

        // Extended purity deletion.
        for x in &xs {
            if !d.current().values().any(|c| c.mentions(x)) {
                continue;
            }
            if let Some(positive) = ext_purity_check(d.current().values(), x) {
                d.push(Step::ExtPurDel { x: x.clone(), positive }).expect("extended purity applies");
                changed = true;
            }
        }

        // Non-redundant constraint factors on X̄-literals.
        let snapshot: Vec<(ClauseId, Clause)> = d.current().iter().map(|(k, c)| (*k, c.clone())).collect();
        for (id, c) in snapshot {
            let lits = c.literals();
            for i in 0..lits.len() {
                for j in (i + 1)..lits.len() {
                    if !(lits[i].is_x_literal(&xs) && lits[i].same_kind(&lits[j])) {
                        continue;
                    }
                    let Ok(f) = constraint_factor(&c, i, j) else { continue };
                    if d.current().values().any(|e| subsumes(e, &f)) {
                        continue;
                    }
                    let out = d.fresh_id();
                    d.push(Step::Fac { c: id, i, j, out }).expect("factor applies");
                    changed = true;
                }
            }
        }

        if !changed {
            return;
        }
    }
}

/// Deletes every clause subsumed by another one. Mutual subsumption keeps the
/// smaller clause (canonical order, then identifier). `protect` is never
/// deleted; with `by = Some(id)` only subsumption by that clause is considered.
pub(crate) fn backward_subsumption(d: &mut Derivation, protect: Option<ClauseId>, by: Option<ClauseId>) -> bool {
    let mut changed = false;
    loop {
        let db = d.current();
        let mut victim = None;
        'outer: for (cid, c) in db {
            if Some(*cid) == protect {
                continue;
            }
            for (did, e) in db {
                if did == cid || by.is_some_and(|b| b != *did) {
                    continue;
                }
                if subsumes(e, c) && (!subsumes(c, e) || (e, did) < (c, cid)) {
                    victim = Some((*cid, *did));
                    break 'outer;
                }
            }
        }
        match victim {
            Some((c, by_id)) => {
                d.push(Step::RedDel { c, reason: RedReason::SubsumedBy(by_id) }).expect("subsumption holds");
                changed = true;
            }
            None => return changed,
        }
    }
}
