//! First-order terms and symbol names.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// Interned-by-sharing symbol name. Cheap to clone, compared by content.
pub type Name = Arc<str>;

/// Builds a [`Name`] from a string slice.
pub fn name(s: &str) -> Name {
    Arc::from(s)
}

/// A first-order term: a variable or a function application.
///
/// Constants are 0-ary applications.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Term {
    Var(Name),
    App(Name, Vec<Term>),
}

/// An address of a subterm: the sequence of argument indices to follow.
pub type TermPath = Vec<usize>;

impl Term {
    pub fn var(v: &str) -> Term {
        Term::Var(name(v))
    }

    pub fn cnst(c: &str) -> Term {
        Term::App(name(c), Vec::new())
    }

    pub fn app(f: &str, args: Vec<Term>) -> Term {
        Term::App(name(f), args)
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn as_var(&self) -> Option<&Name> {
        match self {
            Term::Var(v) => Some(v),
            Term::App(..) => None,
        }
    }

    /// Appends the variables of the term in first-occurrence order (no duplicates).
    pub fn collect_vars(&self, out: &mut Vec<Name>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn var_set(&self, out: &mut BTreeSet<Name>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.var_set(out)),
        }
    }

    /// True iff the variable `v` occurs anywhere in the term.
    pub fn occurs(&self, v: &str) -> bool {
        match self {
            Term::Var(w) => &**w == v,
            Term::App(_, args) => args.iter().any(|a| a.occurs(v)),
        }
    }

    /// True iff `v` occurs in the term strictly below the root.
    pub fn has_proper_subterm_var(&self, v: &str) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().any(|a| a.occurs(v)),
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => args.iter().map(|a| a.depth() + 1).max().unwrap_or(0),
        }
    }

    /// Number of symbol occurrences (variables, constants and function symbols).
    pub fn symbol_count(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::symbol_count).sum::<usize>(),
        }
    }

    /// Collects function symbols with their arities.
    pub fn collect_functions(&self, out: &mut Vec<(Name, usize)>) {
        if let Term::App(f, args) = self {
            if !out.iter().any(|(g, n)| g == f && *n == args.len()) {
                out.push((f.clone(), args.len()));
            }
            args.iter().for_each(|a| a.collect_functions(out));
        }
    }

    pub fn subterm(&self, path: &[usize]) -> Option<&Term> {
        match path.split_first() {
            None => Some(self),
            Some((i, rest)) => match self {
                Term::App(_, args) => args.get(*i).and_then(|a| a.subterm(rest)),
                Term::Var(_) => None,
            },
        }
    }

    /// Returns a copy with the subterm at `path` replaced by `by`.
    pub fn replace_at(&self, path: &[usize], by: &Term) -> Option<Term> {
        match path.split_first() {
            None => Some(by.clone()),
            Some((i, rest)) => match self {
                Term::App(f, args) if *i < args.len() => {
                    let mut new_args = args.clone();
                    new_args[*i] = args[*i].replace_at(rest, by)?;
                    Some(Term::App(f.clone(), new_args))
                }
                _ => None,
            },
        }
    }

    /// All subterm positions in pre-order, including the root (empty path).
    pub fn positions(&self) -> Vec<TermPath> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        self.positions_into(&mut cur, &mut out);
        out
    }

    fn positions_into(&self, cur: &mut TermPath, out: &mut Vec<TermPath>) {
        out.push(cur.clone());
        if let Term::App(_, args) = self {
            for (i, a) in args.iter().enumerate() {
                cur.push(i);
                a.positions_into(cur, out);
                cur.pop();
            }
        }
    }

    /// Renders the term with variables prefixed by `?`, as in problem files.
    pub fn to_problem_string(&self) -> String {
        let mut s = String::new();
        self.write(&mut s, true);
        s
    }

    fn write(&self, out: &mut String, mark_vars: bool) {
        match self {
            Term::Var(v) => {
                if mark_vars {
                    out.push('?');
                }
                out.push_str(v);
            }
            Term::App(f, args) => {
                out.push_str(f);
                if !args.is_empty() {
                    out.push('(');
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            out.push_str(", ");
                        }
                        a.write(out, mark_vars);
                    }
                    out.push(')');
                }
            }
        }
    }

    /// A renaming-invariant rendering where every variable prints as `*`.
    pub(crate) fn shape(&self, out: &mut String) {
        match self {
            Term::Var(_) => out.push('*'),
            Term::App(f, args) => {
                out.push_str(f);
                out.push('(');
                for a in args {
                    a.shape(out);
                    out.push(',');
                }
                out.push(')');
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write(&mut s, false);
        f.write_str(&s)
    }
}

/// Deterministic fresh-name supply that avoids a given set of names.
#[derive(Clone, Debug, Default)]
pub struct FreshNames {
    taken: BTreeSet<String>,
}

impl FreshNames {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn avoiding<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut f = Self::new();
        for n in names {
            f.reserve(n.as_ref());
        }
        f
    }

    pub fn reserve(&mut self, n: &str) {
        self.taken.insert(n.to_string());
    }

    pub fn is_taken(&self, n: &str) -> bool {
        self.taken.contains(n)
    }

    /// Returns `prefix{k}` for the smallest `k` not yet taken, and reserves it.
    pub fn fresh(&mut self, prefix: &str) -> Name {
        let mut k = 0usize;
        loop {
            let cand = format!("{prefix}{k}");
            if !self.taken.contains(&cand) {
                self.taken.insert(cand.clone());
                return name(&cand);
            }
            k += 1;
        }
    }

    /// Returns `base` itself if free, otherwise `base{k}`.
    pub fn fresh_like(&mut self, base: &str) -> Name {
        if !self.taken.contains(base) {
            self.taken.insert(base.to_string());
            return name(base);
        }
        self.fresh(base)
    }
}
