//! Depth-first search for `X̄`-eliminating derivations.
//!
//! Each node of the search tree is a derivation; its children purify one
//! pointed clause with an `X̄`-literal designated and then re-run the
//! preprocessing fixpoint. Derivations are produced lazily, without
//! duplicates, in a deterministic order (ties optionally shuffled by a seed).

use std::collections::HashSet;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::calculus::resolvable_literals;
use crate::logic::{Clause, PointedClause};

use super::derivation::{ClauseId, Derivation, PVarDecl};
use super::pool::LemmaPool;
use super::preprocess::preprocess;
use super::purify::{purify, PurifyOutcome};
use super::SearchLimits;

/// Counters describing how a search went.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub branches: usize,
    pub diverged: usize,
    pub too_long: usize,
    pub timed_out: bool,
    pub branch_limit_hit: bool,
}

struct Frame {
    d: Derivation,
    cands: Vec<(ClauseId, usize)>,
    next: usize,
}

/// A lazy iterator over eliminating derivations.
pub struct Search {
    limits: SearchLimits,
    deadline: Instant,
    stack: Vec<Frame>,
    pending: Option<Derivation>,
    seen: HashSet<String>,
    pool: Option<LemmaPool>,
    rng: Option<ChaCha8Rng>,
    stats: SearchStats,
}

/// Starts a search for `X̄`-eliminating derivations from `n`.
pub fn search(n: Vec<Clause>, xs: Vec<PVarDecl>, limits: SearchLimits) -> Search {
    let deadline = Instant::now() + limits.timeout;
    let names: Vec<_> = xs.iter().map(|d| d.name.clone()).collect();
    let mentions = n.iter().any(|c| c.mentions_any(&names));
    let mut d = Derivation::new(n, xs);
    let mut s = Search {
        rng: limits.seed.map(ChaCha8Rng::seed_from_u64),
        limits,
        deadline,
        stack: Vec::new(),
        pending: None,
        seen: HashSet::new(),
        pool: None,
        stats: SearchStats::default(),
    };
    if !mentions {
        s.pending = Some(d);
        return s;
    }
    preprocess(&mut d);
    if d.is_eliminating() {
        s.pending = Some(d);
    } else {
        let cands = candidates(&d, s.rng.as_mut());
        s.stack.push(Frame { d, cands, next: 0 });
    }
    s
}

impl Search {
    pub fn stats(&self) -> &SearchStats {
        &self.stats
    }
}

impl Iterator for Search {
    type Item = Derivation;

    fn next(&mut self) -> Option<Derivation> {
        if let Some(d) = self.pending.take() {
            self.seen.insert(d.to_trace());
            return Some(d);
        }
        while let Some(frame) = self.stack.last_mut() {
            if Instant::now() > self.deadline {
                self.stats.timed_out = true;
                self.stack.clear();
                return None;
            }
            if frame.next >= frame.cands.len() {
                self.stack.pop();
                continue;
            }
            let (id, lit) = frame.cands[frame.next];
            frame.next += 1;
            self.stats.branches += 1;
            if self.stats.branches > self.limits.max_branches {
                self.stats.branch_limit_hit = true;
                self.stack.clear();
                return None;
            }
            let mut d = frame.d.clone();
            match purify(&mut d, id, lit, &mut self.pool, &self.limits, self.deadline) {
                PurifyOutcome::Purified => {}
                PurifyOutcome::Diverged => {
                    self.stats.diverged += 1;
                    continue;
                }
                PurifyOutcome::TimedOut => {
                    self.stats.timed_out = true;
                    self.stack.clear();
                    return None;
                }
            }
            preprocess(&mut d);
            if d.counted_len() > self.limits.max_steps {
                self.stats.too_long += 1;
                continue;
            }
            if d.is_eliminating() {
                if self.seen.insert(d.to_trace()) {
                    return Some(d);
                }
                continue;
            }
            let cands = candidates(&d, self.rng.as_mut());
            self.stack.push(Frame { d, cands, next: 0 });
        }
        None
    }
}

/// Pointed clauses with an `X̄`-literal designated, best first: one-sided
/// clauses, then fewer resolution partners, then shorter clauses.
pub fn candidates(d: &Derivation, rng: Option<&mut ChaCha8Rng>) -> Vec<(ClauseId, usize)> {
    let xs = d.x_names();
    let db = d.current();
    let mut scored = Vec::new();
    for (id, c) in db {
        let mut seen_lits = Vec::new();
        for (i, l) in c.literals().iter().enumerate() {
            if !l.is_x_literal(&xs) || seen_lits.contains(l) {
                continue;
            }
            seen_lits.push(l.clone());
            let pc = PointedClause::of(c, i);
            let partners: usize =
                db.iter().filter(|(k, _)| *k != id).map(|(_, q)| resolvable_literals(&pc, q).len()).sum();
            scored.push(((!pc.is_one_sided(), partners, c.len()), (*id, i)));
        }
    }
    match rng {
        Some(rng) => {
            let mut keyed: Vec<_> = scored.into_iter().map(|(k, v)| (k, rng.gen::<u64>(), v.0, v.1)).collect();
            keyed.sort();
            keyed.into_iter().map(|(_, _, id, i)| (id, i)).collect()
        }
        None => {
            scored.sort();
            scored.into_iter().map(|(_, v)| v).collect()
        }
    }
}
