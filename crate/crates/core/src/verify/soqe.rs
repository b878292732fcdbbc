//! `∃X̄ N` in a finite model, by enumerating all relations for `X̄`.

use crate::logic::Clause;
use crate::saturation::PVarDecl;

use super::model::{odometer, Env, FiniteModel, Relation};
use super::VerifyError;

/// Largest number of tuples per predicate variable that is enumerated.
pub const MAX_TUPLES: usize = 9;

/// True iff some interpretation of `xs` satisfies every clause of `n` in `m`.
pub fn soqe_holds(m: &FiniteModel, n: &[Clause], xs: &[PVarDecl]) -> Result<bool, VerifyError> {
    let names: Vec<_> = xs.iter().map(|d| d.name.clone()).collect();
    let used: Vec<&PVarDecl> = xs.iter().filter(|d| n.iter().any(|c| c.mentions(&d.name))).collect();
    for d in &used {
        let tuples = m.size().pow(d.arity as u32);
        if tuples > MAX_TUPLES {
            return Err(VerifyError::EnumerationTooLarge { pvar: d.name.to_string(), tuples });
        }
    }
    let env = Env::new();
    let (free, with_x): (Vec<&Clause>, Vec<&Clause>) = n.iter().partition(|c| !c.mentions_any(&names));
    if !m.eval_clauses(&env, free)? {
        return Ok(false);
    }
    let bases: Vec<usize> = used.iter().map(|d| 1usize << m.size().pow(d.arity as u32)).collect();
    let mut masks = vec![0usize; used.len()];
    loop {
        let mut env = Env::new();
        for (d, mask) in used.iter().zip(&masks) {
            env.pvars.insert(d.name.clone(), Relation::from_mask(m.size(), d.arity, *mask as u64));
        }
        if m.eval_clauses(&env, with_x.iter().copied())? {
            return Ok(true);
        }
        if !advance(&mut masks, &bases) {
            return Ok(false);
        }
    }
}

fn advance(digits: &mut [usize], bases: &[usize]) -> bool {
    if digits.is_empty() {
        return false;
    }
    if bases.iter().all(|b| *b == bases[0]) {
        return odometer(digits, bases[0]);
    }
    for (d, b) in digits.iter_mut().zip(bases) {
        *d += 1;
        if *d < *b {
            return true;
        }
        *d = 0;
    }
    false
}
