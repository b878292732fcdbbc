//! Canonical clauses and pointed clauses.
//!
//! A clause is stored in a canonical form: duplicate literals removed, literals
//! ordered by a renaming-invariant shape key, and variables renamed `u0, u1, …`
//! by first occurrence. Ties between literals of equal shape are resolved by
//! taking the lexicographically least rendering over all tie permutations, so
//! two clauses are equal exactly when one is a renaming of the other (up to a
//! permutation cap that is never reached by clauses of realistic size).

use std::collections::BTreeSet;
use std::fmt;

use super::literal::{Head, Literal};
use super::subst::Subst;
use super::term::{name, Name, Term};

/// Upper bound on the number of tie permutations examined during canonicalization.
const PERMUTATION_CAP: usize = 5040;

/// A finite set of literals in canonical form. The empty clause is `⊥`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Clause {
    lits: Vec<Literal>,
}

/// A finite, duplicate-free set of canonical clauses.
pub type ClauseSet = BTreeSet<Clause>;

/// Which polarities a predicate variable occurs with.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Polarities {
    pub positive: bool,
    pub negative: bool,
}

impl Polarities {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn union(self, other: Polarities) -> Polarities {
        Polarities { positive: self.positive || other.positive, negative: self.negative || other.negative }
    }

    pub fn flip(self) -> Polarities {
        Polarities { positive: self.negative, negative: self.positive }
    }

    pub fn is_empty(self) -> bool {
        !self.positive && !self.negative
    }
}

impl Clause {
    pub fn new(lits: Vec<Literal>) -> Clause {
        let (lits, _) = canonicalize(lits, None);
        Clause { lits }
    }

    pub fn empty() -> Clause {
        Clause { lits: Vec::new() }
    }

    pub fn unit(l: Literal) -> Clause {
        Clause::new(vec![l])
    }

    pub fn literals(&self) -> &[Literal] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    /// Variables in first-occurrence order.
    pub fn vars(&self) -> Vec<Name> {
        let mut out = Vec::new();
        self.lits.iter().for_each(|l| l.collect_vars(&mut out));
        out
    }

    pub fn var_set(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.lits.iter().for_each(|l| l.var_set(&mut out));
        out
    }

    pub fn is_ground(&self) -> bool {
        self.lits.iter().all(Literal::is_ground)
    }

    /// Applies a substitution and re-canonicalizes.
    pub fn apply(&self, s: &Subst) -> Clause {
        Clause::new(self.lits.iter().map(|l| l.apply(s)).collect())
    }

    /// Literals of the clause with variables renamed so that none lies in `avoid`.
    ///
    /// The renaming is injective; the returned substitution maps old to new variables.
    pub fn rename_apart(&self, avoid: &BTreeSet<Name>) -> (Vec<Literal>, Subst) {
        rename_literals_apart(&self.lits, avoid)
    }

    pub fn without(&self, idx: usize) -> Vec<Literal> {
        self.lits.iter().enumerate().filter(|(i, _)| *i != idx).map(|(_, l)| l.clone()).collect()
    }

    /// Predicate variables occurring in the clause.
    pub fn pvars(&self) -> BTreeSet<Name> {
        self.lits.iter().filter_map(|l| l.pvar_name().cloned()).collect()
    }

    pub fn mentions_any(&self, xs: &[Name]) -> bool {
        self.lits.iter().any(|l| l.is_x_literal(xs))
    }

    pub fn mentions(&self, x: &str) -> bool {
        self.lits.iter().any(|l| l.pvar_name().is_some_and(|y| &**y == x))
    }

    /// Polarities with which predicate variable `x` occurs.
    pub fn polarity_of(&self, x: &str) -> Polarities {
        let mut p = Polarities::none();
        for l in &self.lits {
            if l.pvar_name().is_some_and(|y| &**y == x) {
                if l.positive {
                    p.positive = true;
                } else {
                    p.negative = true;
                }
            }
        }
        p
    }

    pub fn nonlogical_size(&self) -> usize {
        self.lits.iter().map(Literal::nonlogical_size).sum()
    }

    pub fn max_depth(&self) -> usize {
        self.lits.iter().flat_map(|l| l.args.iter().map(Term::depth)).max().unwrap_or(0)
    }

    /// Function symbols with arities.
    pub fn functions(&self) -> Vec<(Name, usize)> {
        let mut out = Vec::new();
        for l in &self.lits {
            l.args.iter().for_each(|a| a.collect_functions(&mut out));
        }
        out
    }

    /// Problem-file rendering, e.g. `B(?u0, ?u1) | ~X(?u0)`; the empty clause prints as `false`.
    pub fn to_problem_string(&self) -> String {
        if self.lits.is_empty() {
            return "false".to_string();
        }
        self.lits.iter().map(Literal::to_problem_string).collect::<Vec<_>>().join(" | ")
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lits.is_empty() {
            return f.write_str("⊥");
        }
        let parts: Vec<String> = self.lits.iter().map(Literal::to_string).collect();
        f.write_str(&parts.join(" ∨ "))
    }
}

/// A clause with a designated literal, written `L̲ ∨ C`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PointedClause {
    clause: Clause,
    index: usize,
}

impl PointedClause {
    /// Canonicalizes `lits` while tracking which literal is designated.
    ///
    /// Panics if `index` is out of range.
    pub fn new(lits: Vec<Literal>, index: usize) -> PointedClause {
        assert!(index < lits.len(), "designated literal index out of range");
        let (lits, idx) = canonicalize(lits, Some(index));
        PointedClause { clause: Clause { lits }, index: idx.expect("designated literal tracked") }
    }

    /// Points at literal `index` of an existing canonical clause.
    pub fn of(clause: &Clause, index: usize) -> PointedClause {
        PointedClause::new(clause.lits.clone(), index)
    }

    pub fn clause(&self) -> &Clause {
        &self.clause
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn designated(&self) -> &Literal {
        &self.clause.lits[self.index]
    }

    /// The non-designated literals.
    pub fn rest(&self) -> Vec<Literal> {
        self.clause.without(self.index)
    }

    /// One-sided: every occurrence of the designated head has the designated polarity.
    pub fn is_one_sided(&self) -> bool {
        let d = self.designated();
        self.clause.lits.iter().all(|l| l.head != d.head || l.positive == d.positive)
    }

    pub fn to_problem_string(&self) -> String {
        self.clause
            .lits
            .iter()
            .enumerate()
            .map(|(i, l)| if i == self.index { format!("[{}]", l.to_problem_string()) } else { l.to_problem_string() })
            .collect::<Vec<_>>()
            .join(" | ")
    }
}

impl fmt::Display for PointedClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .clause
            .lits
            .iter()
            .enumerate()
            .map(|(i, l)| if i == self.index { format!("[{l}]") } else { l.to_string() })
            .collect();
        f.write_str(&parts.join(" ∨ "))
    }
}

/// Renames the variables of a literal list away from `avoid` (injectively).
pub fn rename_literals_apart(lits: &[Literal], avoid: &BTreeSet<Name>) -> (Vec<Literal>, Subst) {
    let mut vars = Vec::new();
    lits.iter().for_each(|l| l.collect_vars(&mut vars));
    let mut used: BTreeSet<Name> = avoid.clone();
    used.extend(vars.iter().cloned());
    let mut s = Subst::new();
    let mut k = 0usize;
    for v in &vars {
        if !avoid.contains(v) {
            continue;
        }
        let fresh = loop {
            let cand = name(&format!("w{k}"));
            k += 1;
            if !used.contains(&cand) {
                break cand;
            }
        };
        used.insert(fresh.clone());
        s.bind(v.clone(), Term::Var(fresh));
    }
    (lits.iter().map(|l| l.apply(&s)).collect(), s)
}

struct Item {
    lit: Literal,
    symmetric: bool,
    designated: bool,
}

fn shape_string(t: &Term) -> String {
    let mut s = String::new();
    t.shape(&mut s);
    s
}

/// Canonical literal order and variable numbering; tracks a designated literal.
fn canonicalize(lits: Vec<Literal>, designated: Option<usize>) -> (Vec<Literal>, Option<usize>) {
    let mut items: Vec<Item> = Vec::with_capacity(lits.len());
    for (i, mut l) in lits.into_iter().enumerate() {
        let mut symmetric = false;
        if l.head == Head::Eq && l.args.len() == 2 {
            let (ka, kb) = (shape_string(&l.args[0]), shape_string(&l.args[1]));
            if ka > kb {
                l.args.swap(0, 1);
            }
            symmetric = ka == kb;
        }
        let is_designated = designated == Some(i);
        if let Some(existing) = items.iter_mut().find(|it| it.lit.equiv(&l)) {
            existing.designated |= is_designated;
            continue;
        }
        items.push(Item { lit: l, symmetric, designated: is_designated });
    }

    let keys: Vec<_> = items.iter().map(|it| it.lit.shape_key()).collect();
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));

    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        match groups.last_mut() {
            Some(g) if keys[g[0]] == keys[i] => g.push(i),
            _ => groups.push(vec![i]),
        }
    }
    let has_vars = items.iter().any(|it| !it.lit.is_ground());
    let sym: Vec<usize> = if has_vars {
        (0..items.len()).filter(|&i| items[i].symmetric && !items[i].lit.is_ground()).collect()
    } else {
        Vec::new()
    };

    let mut combos: usize = 1;
    if has_vars {
        for g in &groups {
            for k in 2..=g.len() {
                combos = combos.saturating_mul(k);
            }
        }
        for _ in &sym {
            combos = combos.saturating_mul(2);
        }
    }

    if combos <= 1 || combos > PERMUTATION_CAP {
        return realize(&items, &order, &[]);
    }

    let mut best: Option<(Vec<Literal>, Option<usize>)> = None;
    let group_perms: Vec<Vec<Vec<usize>>> = groups.iter().map(|g| permutations(g)).collect();
    let mut choice = vec![0usize; groups.len()];
    loop {
        let ord: Vec<usize> = choice.iter().enumerate().flat_map(|(gi, &ci)| group_perms[gi][ci].iter().copied()).collect();
        for mask in 0..(1usize << sym.len()) {
            let flips: Vec<usize> = sym.iter().enumerate().filter(|(b, _)| mask & (1 << b) != 0).map(|(_, &i)| i).collect();
            let cand = realize(&items, &ord, &flips);
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
        // advance the mixed-radix counter over group permutations
        let mut gi = 0;
        loop {
            if gi == choice.len() {
                return best.expect("at least one candidate");
            }
            choice[gi] += 1;
            if choice[gi] < group_perms[gi].len() {
                break;
            }
            choice[gi] = 0;
            gi += 1;
        }
    }
}

fn realize(items: &[Item], order: &[usize], flips: &[usize]) -> (Vec<Literal>, Option<usize>) {
    let mut renaming: Vec<(Name, Name)> = Vec::new();
    let mut out = Vec::with_capacity(order.len());
    let mut designated = None;
    for (pos, &i) in order.iter().enumerate() {
        let mut l = items[i].lit.clone();
        if flips.contains(&i) {
            l.args.swap(0, 1);
        }
        l.args = l.args.iter().map(|a| rename_term(a, &mut renaming)).collect();
        if items[i].designated {
            designated = Some(pos);
        }
        out.push(l);
    }
    (out, designated)
}

fn rename_term(t: &Term, renaming: &mut Vec<(Name, Name)>) -> Term {
    match t {
        Term::Var(v) => {
            if let Some((_, n)) = renaming.iter().find(|(o, _)| o == v) {
                return Term::Var(n.clone());
            }
            let n = name(&format!("u{}", renaming.len()));
            renaming.push((v.clone(), n.clone()));
            Term::Var(n)
        }
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| rename_term(a, renaming)).collect()),
    }
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}
