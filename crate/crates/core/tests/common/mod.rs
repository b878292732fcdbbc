//! Shared helpers for the integration tests: random clause generation over tiny
//! signatures, an exhaustive finite-model entailment oracle and corpus access.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use wscan::logic::{name, Clause, Literal, Name, Term};
use wscan::verify::{Env, FiniteModel, ModelIter, Relation, Signature};

/// The bundled corpus directory at the workspace root.
pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn corpus_file(file: &str) -> String {
    let path = corpus_dir().join(file);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn v(s: &str) -> Term {
    Term::var(s)
}

pub fn k(s: &str) -> Term {
    Term::cnst(s)
}

pub fn f1(f: &str, t: Term) -> Term {
    Term::app(f, vec![t])
}

/// Symbols available to the random generator.
#[derive(Clone, Debug)]
pub struct GenSig {
    pub consts: Vec<&'static str>,
    pub funcs: Vec<(&'static str, usize)>,
    pub preds: Vec<(&'static str, usize)>,
    pub pvars: Vec<(&'static str, usize)>,
    pub vars: Vec<&'static str>,
    pub equality: bool,
    pub max_depth: usize,
}

impl GenSig {
    /// Constants `a, b`, optional unary `f`, unary `B`, predicate variable `X/1`.
    pub fn tiny(with_function: bool) -> Self {
        GenSig {
            consts: vec!["a", "b"],
            funcs: if with_function { vec![("f", 1)] } else { Vec::new() },
            preds: vec![("B", 1)],
            pvars: vec![("X", 1)],
            vars: vec!["x", "y", "z"],
            equality: true,
            max_depth: 1,
        }
    }
}

/// A seeded random generator of terms, literals and clauses.
pub struct Gen {
    pub rng: ChaCha8Rng,
    pub sig: GenSig,
}

impl Gen {
    pub fn new(seed: u64, sig: GenSig) -> Self {
        use rand::SeedableRng;
        Gen { rng: ChaCha8Rng::seed_from_u64(seed), sig }
    }

    pub fn term(&mut self, depth: usize) -> Term {
        let can_nest = depth > 0 && !self.sig.funcs.is_empty();
        let roll: u32 = self.rng.gen_range(0..10);
        if can_nest && roll < 3 {
            let (f, arity) = *self.sig.funcs.choose(&mut self.rng).expect("function symbol");
            let args = (0..arity).map(|_| self.term(depth - 1)).collect();
            Term::app(f, args)
        } else if roll < 7 && !self.sig.vars.is_empty() {
            Term::var(self.sig.vars.choose(&mut self.rng).expect("variable"))
        } else {
            Term::cnst(self.sig.consts.choose(&mut self.rng).expect("constant"))
        }
    }

    fn args(&mut self, arity: usize) -> Vec<Term> {
        let d = self.sig.max_depth;
        (0..arity).map(|_| self.term(d)).collect()
    }

    pub fn pvar_literal(&mut self, positive: bool) -> Literal {
        let (x, arity) = *self.sig.pvars.choose(&mut self.rng).expect("predicate variable");
        let args = self.args(arity);
        Literal::pvar(positive, x, args)
    }

    pub fn literal(&mut self) -> Literal {
        let positive = self.rng.gen_bool(0.5);
        let roll: u32 = self.rng.gen_range(0..10);
        if roll < 4 && !self.sig.pvars.is_empty() {
            self.pvar_literal(positive)
        } else if roll < 7 || !self.sig.equality {
            let (p, arity) = *self.sig.preds.choose(&mut self.rng).expect("predicate");
            let args = self.args(arity);
            Literal::pred(positive, p, args)
        } else {
            let (s, t) = (self.term(self.sig.max_depth), self.term(self.sig.max_depth));
            if positive {
                Literal::eq(s, t)
            } else {
                Literal::neq(s, t)
            }
        }
    }

    pub fn clause(&mut self, max_lits: usize) -> Clause {
        let n = self.rng.gen_range(1..=max_lits);
        Clause::new((0..n).map(|_| self.literal()).collect())
    }

    pub fn clauses(&mut self, count: usize, max_lits: usize) -> Vec<Clause> {
        (0..count).map(|_| self.clause(max_lits)).collect()
    }
}

/// Predicate variables (with arities) occurring in the clauses.
pub fn pvars_of<'a, I: IntoIterator<Item = &'a Clause>>(cs: I) -> Vec<(Name, usize)> {
    let mut out = BTreeSet::new();
    for c in cs {
        for l in c.literals() {
            if let Some(x) = l.pvar_name() {
                out.insert((x.clone(), l.args.len()));
            }
        }
    }
    out.into_iter().collect()
}

/// Calls `visit` with every model of `sig` of size `1..=max_size`, extended by
/// every interpretation of `pvars` (as environment bindings). Stops early when
/// `visit` returns `false`.
pub fn for_each_interpretation(
    sig: &Signature,
    pvars: &[(Name, usize)],
    max_size: usize,
    mut visit: impl FnMut(&FiniteModel, &Env) -> bool,
) {
    for m in ModelIter::new(sig, max_size) {
        let bases: Vec<u64> = pvars.iter().map(|(_, a)| 1u64 << m.size().pow(*a as u32)).collect();
        let mut masks = vec![0u64; pvars.len()];
        loop {
            let mut env = Env::new();
            for ((x, a), mask) in pvars.iter().zip(&masks) {
                env.pvars.insert(x.clone(), Relation::from_mask(m.size(), *a, *mask));
            }
            if !visit(&m, &env) {
                return;
            }
            let mut i = 0;
            loop {
                if i == masks.len() {
                    break;
                }
                masks[i] += 1;
                if masks[i] < bases[i] {
                    break;
                }
                masks[i] = 0;
                i += 1;
            }
            if i == masks.len() {
                break;
            }
        }
    }
}

/// A model (size ≤ `max_size`, predicate variables read as free predicates)
/// satisfying every premise but falsifying some conclusion, rendered as text.
pub fn entailment_counterexample(premises: &[Clause], conclusions: &[Clause], max_size: usize) -> Option<String> {
    let all: Vec<&Clause> = premises.iter().chain(conclusions).collect();
    let sig = Signature::of_clauses(all.iter().copied());
    let pvars = pvars_of(all.iter().copied());
    let mut found = None;
    for_each_interpretation(&sig, &pvars, max_size, |m, env| {
        let prem = m.eval_clauses(env, premises).expect("closed premises");
        if prem && !m.eval_clauses(env, conclusions).expect("closed conclusions") {
            let rels: Vec<String> = env.pvars.iter().map(|(x, r)| format!("{x} = {:?}", r.tuples())).collect();
            found = Some(format!("{m}\n{}", rels.join(", ")));
            return false;
        }
        true
    });
    found
}

/// True iff the two clause sets agree on every interpretation of size ≤ `max_size`.
pub fn equivalent(a: &[Clause], b: &[Clause], max_size: usize) -> bool {
    entailment_counterexample(a, b, max_size).is_none() && entailment_counterexample(b, a, max_size).is_none()
}

pub fn x_name() -> Name {
    name("X")
}
