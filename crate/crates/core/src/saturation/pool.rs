//! A bounded equational lemma pool.
//!
//! Purification may need consequences of the `X̄`-free equational background
//! (for example domain-closure axioms) that plain resolution cannot produce.
//! The pool saturates the `X̄`-free clauses under paramodulation only, with
//! tautology deletion and forward subsumption, and remembers how each lemma was
//! derived so that it can be imported into a derivation as explicit steps.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::time::Instant;

use crate::calculus::{paramodulants, ParamodOptions, Position};
use crate::logic::{Clause, Literal};
use crate::subsumption::{is_tautology, subsumes, subsumes_l_velim};

/// How a pool clause was obtained.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PoolOrigin {
    /// One of the input clauses.
    Leaf,
    /// Paramodulation from literal `eq_lit` of entry `eq` (right to left when
    /// `flip`) into entry `into` at `pos`.
    ParMod { eq: usize, eq_lit: usize, flip: bool, into: usize, pos: Position },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PoolEntry {
    pub clause: Clause,
    pub origin: PoolOrigin,
}

/// The saturated pool.
#[derive(Clone, Debug, Default)]
pub struct LemmaPool {
    entries: Vec<PoolEntry>,
}

fn has_trivial_equation(c: &Clause) -> bool {
    c.literals().iter().any(|l| l.is_equality() && l.positive && l.args[0] == l.args[1])
}

fn weight(c: &Clause) -> usize {
    c.nonlogical_size() + 2 * c.len()
}

impl LemmaPool {
    /// Saturates `base` under paramodulation within the given caps.
    pub fn build(base: &[Clause], max_clauses: usize, deadline: Instant) -> LemmaPool {
        let max_lits = base.iter().map(Clause::len).max().unwrap_or(0).max(3) + 1;
        let mut entries: Vec<PoolEntry> =
            base.iter().map(|c| PoolEntry { clause: c.clone(), origin: PoolOrigin::Leaf }).collect();
        let mut passive: BinaryHeap<Reverse<(usize, usize)>> =
            entries.iter().enumerate().map(|(i, e)| Reverse((weight(&e.clause), i))).collect();
        let mut active: Vec<usize> = Vec::new();
        let has_equation = base.iter().any(|c| c.literals().iter().any(|l| l.is_equality() && l.positive));
        if !has_equation {
            return LemmaPool { entries };
        }
        let opts = ParamodOptions::default();
        while let Some(Reverse((_, g))) = passive.pop() {
            if Instant::now() > deadline || entries.len() >= max_clauses {
                break;
            }
            let gc = entries[g].clause.clone();
            if active.iter().any(|&a| subsumes(&entries[a].clause, &gc)) {
                continue;
            }
            active.push(g);
            let mut new: Vec<PoolEntry> = Vec::new();
            for &a in &active {
                let ac = &entries[a].clause;
                for (eq, into, eqc, intoc) in [(g, a, &gc, ac), (a, g, ac, &gc)] {
                    for pm in paramodulants(eqc, intoc, opts) {
                        let origin =
                            PoolOrigin::ParMod { eq, eq_lit: pm.eq_idx, flip: pm.flip, into, pos: pm.pos };
                        new.push(PoolEntry { clause: pm.conclusion, origin });
                    }
                    if a == g {
                        break;
                    }
                }
            }
            for e in new {
                let c = &e.clause;
                if c.len() > max_lits || is_tautology(c) || has_trivial_equation(c) {
                    continue;
                }
                if entries.iter().any(|x| subsumes(&x.clause, c)) {
                    continue;
                }
                let w = weight(c);
                entries.push(e);
                passive.push(Reverse((w, entries.len() - 1)));
                if entries.len() >= max_clauses {
                    break;
                }
            }
        }
        LemmaPool { entries }
    }

    pub fn entries(&self) -> &[PoolEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Derived (non-leaf) entries that `⊴_{l}^{ve}`-subsume `target`, in pool order.
    pub fn subsumers<'a>(&'a self, target: &'a Clause, l: &'a Literal) -> impl Iterator<Item = usize> + 'a {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, e)| e.origin != PoolOrigin::Leaf)
            .filter(move |(_, e)| subsumes_l_velim(&e.clause, target, l))
            .map(|(i, _)| i)
    }

    /// The ancestors of entry `i` (including `i`) in dependency order.
    pub fn ancestry(&self, i: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut seen = vec![false; self.entries.len()];
        let mut stack = vec![(i, false)];
        while let Some((n, expanded)) = stack.pop() {
            if expanded {
                out.push(n);
                continue;
            }
            if seen[n] {
                continue;
            }
            seen[n] = true;
            stack.push((n, true));
            if let PoolOrigin::ParMod { eq, into, .. } = self.entries[n].origin {
                stack.push((into, false));
                stack.push((eq, false));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use std::time::Duration;

    use super::*;
    use crate::logic::{Literal, Term};

    fn c(t: &str) -> Term {
        Term::cnst(t)
    }

    #[test]
    fn derives_negative_fact_from_domain_closure() {
        // u = a \/ u = b, ~E(a,a), ~E(a,b)  ⊢  ~E(a,v)
        let v = Term::var("v");
        let closure = Clause::new(vec![Literal::eq(v.clone(), c("a")), Literal::eq(v.clone(), c("b"))]);
        let base = vec![
            closure,
            Clause::unit(Literal::pred(false, "E", vec![c("a"), c("a")])),
            Clause::unit(Literal::pred(false, "E", vec![c("a"), c("b")])),
        ];
        let pool = LemmaPool::build(&base, 500, Instant::now() + Duration::from_secs(5));
        let target = Clause::unit(Literal::pred(false, "E", vec![c("a"), Term::var("w")]));
        let l = Literal::pred(true, "E", vec![c("a"), Term::var("w")]);
        let hit = pool.subsumers(&target, &l).next().expect("lemma derived");
        let anc = pool.ancestry(hit);
        assert_eq!(*anc.last().unwrap(), hit);
        for (k, &n) in anc.iter().enumerate() {
            if let PoolOrigin::ParMod { eq, into, .. } = pool.entries()[n].origin {
                assert!(anc[..k].contains(&eq) && anc[..k].contains(&into));
            }
        }
    }
}
