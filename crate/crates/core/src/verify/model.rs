//! Finite structures, Tarskian evaluation with greatest fixpoints, and
//! exhaustive model enumeration over a signature.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::logic::{Clause, Formula, Head, Literal, Name, Term};

use super::VerifyError;

/// A `k`-ary relation over `{0, …, n−1}` stored as a bit vector.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Relation {
    size: usize,
    arity: usize,
    bits: Vec<bool>,
}

fn tuple_count(size: usize, arity: usize) -> usize {
    size.pow(arity as u32)
}

impl Relation {
    pub fn empty(size: usize, arity: usize) -> Self {
        Relation { size, arity, bits: vec![false; tuple_count(size, arity)] }
    }

    pub fn full(size: usize, arity: usize) -> Self {
        Relation { size, arity, bits: vec![true; tuple_count(size, arity)] }
    }

    /// The relation whose `i`-th tuple (in [`Relation::tuple`] order) is included
    /// iff bit `i` of `mask` is set.
    pub fn from_mask(size: usize, arity: usize, mask: u64) -> Self {
        let bits = (0..tuple_count(size, arity)).map(|i| mask >> i & 1 == 1).collect();
        Relation { size, arity, bits }
    }

    pub fn from_tuples<I: IntoIterator<Item = Vec<usize>>>(size: usize, arity: usize, tuples: I) -> Self {
        let mut r = Self::empty(size, arity);
        for t in tuples {
            r.insert(&t);
        }
        r
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len_tuples(&self) -> usize {
        self.bits.len()
    }

    fn index(&self, t: &[usize]) -> usize {
        t.iter().fold(0, |acc, &e| acc * self.size + e)
    }

    /// The `i`-th tuple in lexicographic order.
    pub fn tuple(&self, mut i: usize) -> Vec<usize> {
        let mut t = vec![0; self.arity];
        for slot in t.iter_mut().rev() {
            *slot = i % self.size.max(1);
            i /= self.size.max(1);
        }
        t
    }

    pub fn contains(&self, t: &[usize]) -> bool {
        self.bits[self.index(t)]
    }

    pub fn insert(&mut self, t: &[usize]) {
        let i = self.index(t);
        self.bits[i] = true;
    }

    pub fn set(&mut self, i: usize, value: bool) {
        self.bits[i] = value;
    }

    pub fn tuples(&self) -> Vec<Vec<usize>> {
        (0..self.bits.len()).filter(|&i| self.bits[i]).map(|i| self.tuple(i)).collect()
    }
}

/// A finite interpretation of function and predicate symbols.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiniteModel {
    size: usize,
    funcs: BTreeMap<Name, (usize, Vec<usize>)>,
    preds: BTreeMap<Name, Relation>,
}

impl FiniteModel {
    pub fn new(size: usize) -> Self {
        assert!(size >= 1, "domains are nonempty");
        FiniteModel { size, funcs: BTreeMap::new(), preds: BTreeMap::new() }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn set_constant(&mut self, c: &Name, e: usize) {
        self.funcs.insert(c.clone(), (0, vec![e]));
    }

    /// Sets a function table indexed like [`Relation`] tuples.
    pub fn set_function(&mut self, f: &Name, arity: usize, table: Vec<usize>) {
        assert_eq!(table.len(), tuple_count(self.size, arity));
        self.funcs.insert(f.clone(), (arity, table));
    }

    pub fn set_predicate(&mut self, p: &Name, r: Relation) {
        self.preds.insert(p.clone(), r);
    }

    pub fn predicate(&self, p: &str) -> Option<&Relation> {
        self.preds.get(p)
    }

    pub fn term_value(&self, t: &Term, env: &Env) -> Result<usize, VerifyError> {
        match t {
            Term::Var(v) => env.vars.get(v).copied().ok_or_else(|| VerifyError::Unbound(v.to_string())),
            Term::App(f, args) => {
                let (arity, table) = self.funcs.get(f).ok_or_else(|| VerifyError::Unbound(f.to_string()))?;
                if *arity != args.len() {
                    return Err(VerifyError::Unbound(format!("{f}/{}", args.len())));
                }
                let mut idx = 0;
                for a in args {
                    idx = idx * self.size + self.term_value(a, env)?;
                }
                Ok(table[idx])
            }
        }
    }

    fn values(&self, args: &[Term], env: &Env) -> Result<Vec<usize>, VerifyError> {
        args.iter().map(|a| self.term_value(a, env)).collect()
    }

    pub fn eval_literal(&self, env: &Env, l: &Literal) -> Result<bool, VerifyError> {
        let vals = self.values(&l.args, env)?;
        let atom = match &l.head {
            Head::Eq => vals[0] == vals[1],
            Head::Pred(p) => self.preds.get(p).ok_or_else(|| VerifyError::Unbound(p.to_string()))?.contains(&vals),
            Head::PVar(x) => env.pvars.get(x).ok_or_else(|| VerifyError::Unbound(x.to_string()))?.contains(&vals),
        };
        Ok(atom == l.positive)
    }

    /// Truth of the universal closure of a clause (free variables already in
    /// `env` are kept).
    pub fn eval_clause(&self, env: &Env, c: &Clause) -> Result<bool, VerifyError> {
        let vars: Vec<Name> = c.vars().into_iter().filter(|v| !env.vars.contains_key(v)).collect();
        let mut env = env.clone();
        let mut assignment = vec![0usize; vars.len()];
        loop {
            for (v, e) in vars.iter().zip(&assignment) {
                env.vars.insert(v.clone(), *e);
            }
            let mut sat = false;
            for l in c.literals() {
                if self.eval_literal(&env, l)? {
                    sat = true;
                    break;
                }
            }
            if !sat {
                return Ok(false);
            }
            if !odometer(&mut assignment, self.size) {
                return Ok(true);
            }
        }
    }

    pub fn eval_clauses<'a, I: IntoIterator<Item = &'a Clause>>(&self, env: &Env, cs: I) -> Result<bool, VerifyError> {
        for c in cs {
            if !self.eval_clause(env, c)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Tarskian evaluation; `gfp` by downward iteration from the full relation.
    pub fn eval(&self, env: &mut Env, phi: &Formula) -> Result<bool, VerifyError> {
        Ok(match phi {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(head, args) => self.eval_literal(env, &Literal::new(true, head.clone(), args.clone()))?,
            Formula::Not(f) => !self.eval(env, f)?,
            Formula::And(fs) => {
                for f in fs {
                    if !self.eval(env, f)? {
                        return Ok(false);
                    }
                }
                true
            }
            Formula::Or(fs) => {
                for f in fs {
                    if self.eval(env, f)? {
                        return Ok(true);
                    }
                }
                false
            }
            Formula::Implies(a, b) => !self.eval(env, a)? || self.eval(env, b)?,
            Formula::Iff(a, b) => self.eval(env, a)? == self.eval(env, b)?,
            Formula::Forall(v, f) | Formula::Exists(v, f) => {
                let univ = matches!(phi, Formula::Forall(..));
                let saved = env.vars.get(v).copied();
                let mut result = univ;
                for e in 0..self.size {
                    env.vars.insert(v.clone(), e);
                    if self.eval(env, f)? != univ {
                        result = !univ;
                        break;
                    }
                }
                restore(&mut env.vars, v, saved);
                result
            }
            Formula::Gfp(g) => {
                let vals = self.values(&g.args, env)?;
                let rel = self.gfp_relation(env, &g.pred, &g.vars, &g.body)?;
                rel.contains(&vals)
            }
        })
    }

    /// The greatest fixpoint of `R ↦ {m̄ | body[Y ← R, ū ← m̄]}`.
    pub fn gfp_relation(&self, env: &mut Env, y: &Name, vars: &[Name], body: &Formula) -> Result<Relation, VerifyError> {
        let arity = vars.len();
        let saved_y = env.pvars.get(y).cloned();
        let saved_vars: Vec<Option<usize>> = vars.iter().map(|v| env.vars.get(v).copied()).collect();
        let mut current = Relation::full(self.size, arity);
        loop {
            env.pvars.insert(y.clone(), current.clone());
            let mut next = Relation::empty(self.size, arity);
            for i in 0..current.len_tuples() {
                let t = current.tuple(i);
                for (v, e) in vars.iter().zip(&t) {
                    env.vars.insert(v.clone(), *e);
                }
                if self.eval(env, body)? {
                    next.set(i, true);
                }
            }
            if next == current {
                break;
            }
            current = next;
        }
        match saved_y {
            Some(r) => {
                env.pvars.insert(y.clone(), r);
            }
            None => {
                env.pvars.remove(y);
            }
        }
        for (v, s) in vars.iter().zip(saved_vars) {
            restore(&mut env.vars, v, s);
        }
        Ok(current)
    }

    /// The extension `{m̄ | body[ū ← m̄]}` of a predicate expression.
    pub fn extension(&self, env: &Env, vars: &[Name], body: &Formula) -> Result<Relation, VerifyError> {
        let mut env = env.clone();
        let mut r = Relation::empty(self.size, vars.len());
        for i in 0..r.len_tuples() {
            let t = r.tuple(i);
            for (v, e) in vars.iter().zip(&t) {
                env.vars.insert(v.clone(), *e);
            }
            if self.eval(&mut env, body)? {
                r.set(i, true);
            }
        }
        Ok(r)
    }
}

fn restore(vars: &mut BTreeMap<Name, usize>, v: &Name, saved: Option<usize>) {
    match saved {
        Some(e) => {
            vars.insert(v.clone(), e);
        }
        None => {
            vars.remove(v);
        }
    }
}

/// Advances a base-`base` counter; false when it wraps around.
pub(crate) fn odometer(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

impl fmt::Display for FiniteModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "domain {{0..{}}}", self.size - 1)?;
        for (name, (arity, table)) in &self.funcs {
            if *arity == 0 {
                write!(f, "; {name} = {}", table[0])?;
            } else {
                write!(f, "; {name} = {table:?}")?;
            }
        }
        for (name, r) in &self.preds {
            write!(f, "; {name} = {:?}", r.tuples())?;
        }
        Ok(())
    }
}

/// Values for free first-order and predicate variables.
#[derive(Clone, Debug, Default)]
pub struct Env {
    pub vars: BTreeMap<Name, usize>,
    pub pvars: BTreeMap<Name, Relation>,
}

impl Env {
    pub fn new() -> Self {
        Self::default()
    }
}

/// Function symbols (constants have arity 0) and predicate symbols.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub funcs: BTreeSet<(Name, usize)>,
    pub preds: BTreeSet<(Name, usize)>,
}

impl Signature {
    pub fn of_clauses<'a, I: IntoIterator<Item = &'a Clause>>(cs: I) -> Self {
        let mut s = Signature::default();
        for c in cs {
            s.add_clause(c);
        }
        s
    }

    pub fn add_clause(&mut self, c: &Clause) {
        for l in c.literals() {
            self.add_literal_parts(&l.head, &l.args);
        }
    }

    fn add_literal_parts(&mut self, head: &Head, args: &[Term]) {
        if let Head::Pred(p) = head {
            self.preds.insert((p.clone(), args.len()));
        }
        for a in args {
            let mut fs = Vec::new();
            a.collect_functions(&mut fs);
            self.funcs.extend(fs);
        }
    }

    /// Adds the symbols of a formula (predicate variables are not symbols).
    pub fn add_formula(&mut self, phi: &Formula) {
        phi.visit(&mut |f| match f {
            Formula::Atom(h, args) => self.add_literal_parts(h, args),
            Formula::Gfp(g) => {
                for a in &g.args {
                    let mut fs = Vec::new();
                    a.collect_functions(&mut fs);
                    self.funcs.extend(fs);
                }
            }
            _ => {}
        });
    }

    /// Non-constant function symbols.
    pub fn proper_functions(&self) -> impl Iterator<Item = &(Name, usize)> {
        self.funcs.iter().filter(|(_, a)| *a > 0)
    }
}

/// Limits for exhaustive model enumeration.
#[derive(Clone, Copy, Debug)]
pub struct EnumLimits {
    pub max_size: usize,
    /// Stop after this many models in total.
    pub max_models: usize,
}

impl Default for EnumLimits {
    fn default() -> Self {
        EnumLimits { max_size: 3, max_models: 200_000 }
    }
}

/// Largest domain size worth enumerating for `sig`: size 3 only for at most two
/// proper function symbols of arity ≤ 2, otherwise size 2.
pub fn size_bound(sig: &Signature, requested: usize) -> usize {
    let proper: Vec<_> = sig.proper_functions().collect();
    if requested >= 3 && (proper.len() > 2 || proper.iter().any(|(_, a)| *a > 2)) {
        2
    } else {
        requested
    }
}

/// Iterates over all models of `sig` with sizes `1..=size`, in a fixed order.
pub struct ModelIter {
    sig: Vec<(Name, usize, bool)>,
    size: usize,
    max_size: usize,
    digits: Vec<usize>,
    bases: Vec<usize>,
    started: bool,
    done: bool,
}

impl ModelIter {
    pub fn new(sig: &Signature, max_size: usize) -> Self {
        let mut symbols: Vec<(Name, usize, bool)> = sig.funcs.iter().map(|(n, a)| (n.clone(), *a, true)).collect();
        symbols.extend(sig.preds.iter().map(|(n, a)| (n.clone(), *a, false)));
        let mut it = ModelIter { sig: symbols, size: 1, max_size, digits: Vec::new(), bases: Vec::new(), started: false, done: max_size == 0 };
        it.reset_digits();
        it
    }

    fn reset_digits(&mut self) {
        self.bases.clear();
        for (_, arity, is_func) in &self.sig {
            let cells = tuple_count(self.size, *arity);
            let base = if *is_func { self.size } else { 2 };
            self.bases.extend(std::iter::repeat(base).take(cells));
        }
        self.digits = vec![0; self.bases.len()];
    }

    fn current(&self) -> FiniteModel {
        let mut m = FiniteModel::new(self.size);
        let mut pos = 0;
        for (name, arity, is_func) in &self.sig {
            let cells = tuple_count(self.size, *arity);
            let slice = &self.digits[pos..pos + cells];
            if *is_func {
                m.funcs.insert(name.clone(), (*arity, slice.to_vec()));
            } else {
                let mut r = Relation::empty(self.size, *arity);
                for (i, d) in slice.iter().enumerate() {
                    r.set(i, *d == 1);
                }
                m.preds.insert(name.clone(), r);
            }
            pos += cells;
        }
        m
    }

    fn advance(&mut self) -> bool {
        for (d, b) in self.digits.iter_mut().zip(&self.bases) {
            *d += 1;
            if *d < *b {
                return true;
            }
            *d = 0;
        }
        false
    }
}

impl Iterator for ModelIter {
    type Item = FiniteModel;

    fn next(&mut self) -> Option<FiniteModel> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.current());
        }
        if !self.advance() {
            self.size += 1;
            if self.size > self.max_size {
                self.done = true;
                return None;
            }
            self.reset_digits();
        }
        Some(self.current())
    }
}
