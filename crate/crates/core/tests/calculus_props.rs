//! Soundness and oracle properties of subsumption, variable elimination and the
//! inference rules.

mod common;

use proptest::prelude::*;
use rand::Rng;

use common::*;
use wscan::calculus::{
    constraint_eliminate, constraint_factor, greedy_constraint_selection, is_purified, paramodulants,
    res_p_bounded, resolvable_literals, resolve, ParamodOptions,
};
use wscan::frontend::{merge_theory, parse_problem};
use wscan::logic::{Clause, ClauseSet, Literal, PointedClause};
use wscan::subsumption::{
    subsumes, subsumes_l, subsumes_l_velim, velim_closure, velim_closure_pointed, velim_step,
};
use wscan::verify::resolve_std;

/// Two clauses over the tiny signature, the second often an instance-like
/// variation of the first so that subsumption actually holds sometimes.
fn clause_pair(seed: u64) -> (Clause, Clause, Literal) {
    let mut g = Gen::new(seed, GenSig::tiny(seed % 2 == 0));
    let e = g.clause(4);
    let c = if g.rng.gen_bool(0.5) {
        let keep: Vec<Literal> = e.literals().iter().filter(|_| g.rng.gen_bool(0.6)).cloned().collect();
        if keep.is_empty() { Clause::unit(e.literals()[0].clone()) } else { Clause::new(keep) }
    } else {
        g.clause(2)
    };
    let pos = g.rng.gen_bool(0.5);
    let l = g.pvar_literal(pos);
    (c, e, l)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn accepted_subsumptions_are_implications(seed in any::<u64>()) {
        let (c, e, l) = clause_pair(seed);
        if subsumes(&c, &e) || subsumes_l(&c, &e, &l) || subsumes_l_velim(&c, &e, &l) {
            let cex = entailment_counterexample(&[c.clone()], &[e.clone()], 3);
            prop_assert!(cex.is_none(), "{} does not imply {}:\n{:?}", c, e, cex);
        }
    }

    #[test]
    fn subsumption_relations_are_nested(seed in any::<u64>()) {
        let (c, e, l) = clause_pair(seed);
        if subsumes_l(&c, &e, &l) {
            prop_assert!(subsumes(&c, &e));
            prop_assert!(subsumes_l_velim(&c, &e, &l));
        }
        let subset = c.literals().iter().all(|m| e.literals().contains(m));
        if subset {
            prop_assert!(subsumes_l(&c, &e, &l));
        }
    }

    #[test]
    fn variable_elimination_preserves_meaning(seed in any::<u64>()) {
        let mut g = Gen::new(seed, GenSig::tiny(seed % 2 == 0));
        let mut c = g.clause(3);
        // Make sure there is usually something to eliminate.
        let extra = Literal::neq(v("x"), g.term(1));
        c = Clause::new(c.literals().iter().cloned().chain([extra]).collect());
        for c2 in velim_closure(&c).iter() {
            prop_assert!(equivalent(&[c.clone()], &[c2.clone()], 3), "{} vs {}", c, c2);
        }
        for i in 0..c.len() {
            if let Some(lits) = velim_step(c.literals(), i) {
                prop_assert!(Clause::new(lits).len() < c.len());
            }
        }
    }

    #[test]
    fn pointed_variable_elimination_keeps_the_designated_literal(seed in any::<u64>()) {
        let mut g = Gen::new(seed, GenSig::tiny(true));
        let pos = g.rng.gen_bool(0.5);
        let mut lits = vec![g.pvar_literal(pos), Literal::neq(v("x"), g.term(1))];
        lits.extend(g.clause(2).literals().iter().cloned());
        let p = PointedClause::new(lits, 0);
        for q in velim_closure_pointed(&p) {
            prop_assert!(q.designated().pvar_name().is_some());
            prop_assert_eq!(q.designated().positive, p.designated().positive);
        }
    }

    #[test]
    fn rules_are_sound(seed in any::<u64>()) {
        let mut g = Gen::new(seed, GenSig::tiny(false));
        let n = g.clauses(2, 3);
        let (p, q) = (&n[0], &n[1]);
        let mut conclusions: Vec<(Vec<Clause>, Clause)> = Vec::new();
        for (i, l) in p.literals().iter().enumerate() {
            if l.pvar_name().is_some() {
                let pointed = PointedClause::of(p, i);
                for j in resolvable_literals(&pointed, q) {
                    conclusions.push((vec![p.clone(), q.clone()], resolve(&pointed, q, j).unwrap()));
                }
            }
            for j in 0..p.len() {
                if let Ok(r) = constraint_factor(p, i, j) {
                    conclusions.push((vec![p.clone()], r));
                }
            }
        }
        let sel = greedy_constraint_selection(p);
        if !sel.is_empty() {
            conclusions.push((vec![p.clone()], constraint_eliminate(p, &sel).unwrap()));
        }
        for pm in paramodulants(p, q, ParamodOptions::default()) {
            conclusions.push((vec![p.clone(), q.clone()], pm.conclusion));
        }
        for (premises, c) in conclusions {
            if c.var_set().len() > 4 {
                continue;
            }
            let cex = entailment_counterexample(&premises, &[c.clone()], 3);
            prop_assert!(cex.is_none(), "{:?} does not entail {}:\n{:?}", premises, c, cex);
        }
    }

    #[test]
    fn resolution_then_constraint_elimination_is_ordinary_resolution(seed in any::<u64>()) {
        let mut g = Gen::new(seed, GenSig::tiny(true));
        let n = g.clauses(2, 3);
        let (p, q) = (&n[0], &n[1]);
        for (i, l) in p.literals().iter().enumerate() {
            if l.pvar_name().is_none() {
                continue;
            }
            let pointed = PointedClause::of(p, i);
            for j in resolvable_literals(&pointed, q) {
                let r = resolve(&pointed, q, j).unwrap();
                let direct = resolve_std(p, i, q, j);
                // The new constraints are exactly the literals absent from the plain union.
                let arity = l.args.len();
                let constraints: Vec<usize> = r
                    .literals()
                    .iter()
                    .enumerate()
                    .filter(|(_, m)| m.is_constraint())
                    .map(|(k, _)| k)
                    .collect();
                match direct {
                    None => {
                        // Not unifiable: some subset of the constraints cannot be eliminated.
                        prop_assert!(arity > 0);
                    }
                    Some(d) => {
                        // Some selection of the resolvent's constraints yields the mgu resolvent.
                        let found = subsets(&constraints)
                            .into_iter()
                            .filter(|s| !s.is_empty() || arity == 0)
                            .any(|s| {
                                let c = if s.is_empty() { Ok(r.clone()) } else { constraint_eliminate(&r, &s) };
                                c.map(|c| c == d).unwrap_or(false)
                            });
                        prop_assert!(found, "{} / {}: Res+ConstrElim never gives {}", r, p, d);
                    }
                }
            }
        }
    }

    #[test]
    fn purification_agrees_with_brute_force(seed in any::<u64>()) {
        let mut g = Gen::new(seed, GenSig::tiny(seed % 2 == 0));
        let pos = g.rng.gen_bool(0.5);
        let mut lits = vec![g.pvar_literal(pos)];
        lits.extend(g.clause(2).literals().iter().cloned());
        let p = PointedClause::new(lits, 0);
        let mut n = g.clauses(3, 2);
        // Often add the variable-eliminated resolvents so that purification holds.
        if g.rng.gen_bool(0.6) {
            let snapshot = n.clone();
            for q in &snapshot {
                for j in resolvable_literals(&p, q) {
                    let r = resolve(&p, q, j).unwrap();
                    n.push(wscan::subsumption::velim_normal_form(&r));
                }
            }
        }
        let lbot = p.designated().negated();
        // Res_P^{≤1}(N) minus N itself: every one-step resolvent must be subsumed.
        let brute = n.iter().all(|q| {
            resolvable_literals(&p, q).into_iter().all(|j| {
                let r = resolve(&p, q, j).unwrap();
                n.iter().any(|s| velim_closure(&r).iter().any(|r2| subsumes_l(s, r2, &lbot)))
            })
        });
        prop_assert_eq!(is_purified(&p, &n).is_some(), brute);
    }
}

fn subsets(items: &[usize]) -> Vec<Vec<usize>> {
    (0u32..1 << items.len())
        .map(|mask| items.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, x)| *x).collect())
        .collect()
}

/// Whenever a corpus pointed clause is purified in the rest of its problem,
/// its bounded resolution closure is entailed by the rest.
#[test]
fn purified_clauses_have_entailed_closures() {
    let mut checked = 0;
    for file in ["01-main.problem", "02-two-units.problem", "06-swap.problem", "07-ackermann-unary.problem"] {
        let p = merge_theory(&parse_problem(&corpus_file(file)).unwrap()).unwrap();
        for (ci, c) in p.clauses.iter().enumerate() {
            for (li, l) in c.literals().iter().enumerate() {
                if l.pvar_name().is_none() {
                    continue;
                }
                let pointed = PointedClause::of(c, li);
                let rest: Vec<Clause> = p.clauses.iter().enumerate().filter(|(i, _)| *i != ci).map(|(_, c)| c.clone()).collect();
                if is_purified(&pointed, &rest).is_none() {
                    continue;
                }
                let seed: ClauseSet = rest.iter().cloned().collect();
                let closure: Vec<Clause> = res_p_bounded(&pointed, &seed, 3)
                    .into_iter()
                    .filter(|r| r.var_set().len() <= 4)
                    .collect();
                let cex = entailment_counterexample(&rest, &closure, 3);
                assert!(cex.is_none(), "{file}: closure of {pointed} not entailed:\n{cex:?}");
                checked += 1;
            }
        }
    }
    assert!(checked > 0, "no purified corpus clause found");
}
