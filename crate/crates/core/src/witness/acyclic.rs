//! Purification subsumptions and their graphs: choosing, for every resolvable
//! pointed clause, a subsuming clause so that the induced graph is acyclic with
//! a shortest possible longest path.

use crate::calculus::purification_candidates;
use crate::logic::{Clause, PointedClause};

/// Caps for the subsumption-assignment search.
#[derive(Clone, Copy, Debug)]
pub struct AcyclicLimits {
    /// Candidate subsumers kept per resolvable pointed clause.
    pub max_candidates: usize,
    /// Search nodes explored before giving up.
    pub max_nodes: usize,
}

impl Default for AcyclicLimits {
    fn default() -> Self {
        AcyclicLimits { max_candidates: 64, max_nodes: 100_000 }
    }
}

/// One edge `Q →^{L'} s(Q)` (indices into the clause slice).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PsEdge {
    pub from: usize,
    pub literal: usize,
    pub to: usize,
}

/// An acyclic purification subsumption with its longest path length.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AcyclicPurification {
    pub edges: Vec<PsEdge>,
    pub longest_path: usize,
    /// False if the node budget ran out before minimality was established.
    pub minimal: bool,
}

/// Why no acyclic purification subsumption was returned.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AcyclicFailure {
    /// The pointed clause is not purified in the clause set.
    NotPurified,
    /// Every purification subsumption induces a cycle.
    Cyclic,
    /// The search budget ran out before any acyclic choice was found.
    BudgetExceeded,
}

/// Longest path (in edges) of the graph, or `None` if it has a cycle.
pub fn longest_path(n: usize, edges: &[PsEdge]) -> Option<usize> {
    let mut adj = vec![Vec::new(); n];
    for e in edges {
        adj[e.from].push(e.to);
    }
    // 0 = unvisited, 1 = on stack, 2 = done.
    let mut state = vec![0u8; n];
    let mut depth = vec![0usize; n];
    for start in 0..n {
        if state[start] != 0 {
            continue;
        }
        let mut stack = vec![(start, 0usize)];
        state[start] = 1;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if *next < adj[v].len() {
                let w = adj[v][*next];
                *next += 1;
                match state[w] {
                    0 => {
                        state[w] = 1;
                        stack.push((w, 0));
                    }
                    1 => return None,
                    _ => {}
                }
            } else {
                depth[v] = adj[v].iter().map(|&w| depth[w] + 1).max().unwrap_or(0);
                state[v] = 2;
                stack.pop();
            }
        }
    }
    Some(depth.into_iter().max().unwrap_or(0))
}

struct Searcher<'a> {
    n: usize,
    slots: &'a [(usize, usize, Vec<usize>)],
    chosen: Vec<PsEdge>,
    best: Option<(usize, Vec<PsEdge>)>,
    nodes: usize,
    limits: AcyclicLimits,
    exhausted: bool,
}

impl Searcher<'_> {
    fn run(&mut self, i: usize) {
        self.nodes += 1;
        if self.nodes > self.limits.max_nodes {
            self.exhausted = true;
            return;
        }
        let Some(len) = longest_path(self.n, &self.chosen) else { return };
        if self.best.as_ref().is_some_and(|(b, _)| len >= *b) {
            return;
        }
        if i == self.slots.len() {
            self.best = Some((len, self.chosen.clone()));
            return;
        }
        let (from, literal, ref subs) = self.slots[i];
        for &to in subs.iter().take(self.limits.max_candidates) {
            self.chosen.push(PsEdge { from, literal, to });
            self.run(i + 1);
            self.chosen.pop();
            if self.exhausted {
                return;
            }
        }
    }
}

/// Searches for a purification subsumption of `p` in `n` whose graph is acyclic
/// with minimal longest path.
pub fn find_acyclic(
    p: &PointedClause,
    n: &[Clause],
    limits: AcyclicLimits,
) -> Result<AcyclicPurification, AcyclicFailure> {
    let mut slots = purification_candidates(p, n).ok_or(AcyclicFailure::NotPurified)?;
    // Prefer subsumers that are not themselves sources of edges (sinks first),
    // then fewer choices first for earlier pruning.
    let sources: Vec<usize> = slots.iter().map(|s| s.0).collect();
    for s in &mut slots {
        s.2.sort_by_key(|&t| (t == s.0, sources.contains(&t), t));
    }
    slots.sort_by_key(|s| s.2.len());
    let mut searcher =
        Searcher { n: n.len(), slots: &slots, chosen: Vec::new(), best: None, nodes: 0, limits, exhausted: false };
    searcher.run(0);
    match searcher.best {
        Some((longest_path, edges)) => Ok(AcyclicPurification { edges, longest_path, minimal: !searcher.exhausted }),
        None if searcher.exhausted => Err(AcyclicFailure::BudgetExceeded),
        None => Err(AcyclicFailure::Cyclic),
    }
}
