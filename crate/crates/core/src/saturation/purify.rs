//! Purification of a pointed clause: resolve it against the current clause set
//! until every resolvent is subsumed, then delete it.

use std::collections::BTreeMap;
use std::time::Instant;

use crate::calculus::{resolvable_literals, resolve};
use crate::logic::{Clause, Literal, Name, PointedClause};
use crate::subsumption::{subsumes_l_velim, velim_normal_form};

use super::derivation::{ClauseId, Derivation, Step};
use super::pool::{LemmaPool, PoolOrigin};
use super::preprocess::backward_subsumption;
use super::SearchLimits;

/// Result of an attempted purification.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PurifyOutcome {
    /// The pointed clause was purified and deleted.
    Purified,
    /// The inference budget ran out.
    Diverged,
    /// The search deadline passed.
    TimedOut,
}

/// Purifies pointed clause `id.lit` inside `d`, recording every step. On a
/// non-`Purified` outcome `d` holds a partial derivation and should be dropped.
pub fn purify(
    d: &mut Derivation,
    id: ClauseId,
    lit: usize,
    pool: &mut Option<LemmaPool>,
    limits: &SearchLimits,
    deadline: Instant,
) -> PurifyOutcome {
    let Some(p_clause) = d.current().get(&id).cloned() else { return PurifyOutcome::Diverged };
    let pc = PointedClause::of(&p_clause, lit);
    let lbot = pc.designated().negated();
    let mut inferences = 0usize;
    loop {
        let mut added = false;
        let snapshot: Vec<ClauseId> = d.current().keys().copied().filter(|k| *k != id).collect();
        for qid in snapshot {
            let Some(q) = d.current().get(&qid).cloned() else { continue };
            for j in resolvable_literals(&pc, &q) {
                if Instant::now() > deadline {
                    return PurifyOutcome::TimedOut;
                }
                let Ok(r) = resolve(&pc, &q, j) else { continue };
                if d.current().iter().any(|(k, s)| *k != id && subsumes_l_velim(s, &r, &lbot)) {
                    continue;
                }
                if let Some(n) = import_lemma(d, &r, &lbot, pool, limits, deadline) {
                    inferences += n;
                    added = true;
                    continue;
                }
                inferences += 1;
                if inferences > limits.purify_budget {
                    return PurifyOutcome::Diverged;
                }
                let out = d.fresh_id();
                if d.push(Step::Res { p: id, p_lit: lit, q: qid, q_lit: j, out }).is_err() {
                    return PurifyOutcome::Diverged;
                }
                let mut new_id = out;
                if velim_normal_form(&r) != r {
                    new_id = d.fresh_id();
                    d.push(Step::VarElim { c: out, out: new_id }).expect("variable elimination applies");
                }
                backward_subsumption(d, Some(id), Some(new_id));
                added = true;
            }
        }
        if !added {
            break;
        }
    }
    match d.push(Step::PurDel { c: id, lit }) {
        Ok(()) => PurifyOutcome::Purified,
        Err(_) => PurifyOutcome::Diverged,
    }
}

/// Imports a pool lemma subsuming `r` (w.r.t. `l`) as paramodulation steps.
/// Returns the number of inferences added.
fn import_lemma(
    d: &mut Derivation,
    r: &Clause,
    l: &Literal,
    pool: &mut Option<LemmaPool>,
    limits: &SearchLimits,
    deadline: Instant,
) -> Option<usize> {
    let pool = pool.get_or_insert_with(|| {
        let xs: Vec<Name> = d.x_names();
        let base: Vec<Clause> = d.current().values().filter(|c| !c.mentions_any(&xs)).cloned().collect();
        LemmaPool::build(&base, limits.pool_max_clauses, deadline)
    });
    let hits: Vec<usize> = pool.subsumers(r, l).collect();
    'hit: for s in hits {
        let anc = pool.ancestry(s);
        let mut map: BTreeMap<usize, ClauseId> = BTreeMap::new();
        for &n in &anc {
            let e = &pool.entries()[n];
            if let Some((k, _)) = d.current().iter().find(|(_, c)| **c == e.clause) {
                map.insert(n, *k);
            } else if e.origin == PoolOrigin::Leaf {
                continue 'hit;
            }
        }
        let mut trial = d.clone();
        let mut count = 0;
        for &n in &anc {
            if map.contains_key(&n) {
                continue;
            }
            let PoolOrigin::ParMod { eq, eq_lit, flip, into, ref pos } = pool.entries()[n].origin else {
                continue 'hit;
            };
            let out = trial.fresh_id();
            let step = Step::ParMod { eq: map[&eq], eq_lit, flip: Some(flip), into: map[&into], pos: pos.clone(), out };
            if trial.push(step).is_err() {
                continue 'hit;
            }
            map.insert(n, out);
            count += 1;
        }
        if count == 0 {
            continue;
        }
        *d = trial;
        return Some(count);
    }
    None
}
