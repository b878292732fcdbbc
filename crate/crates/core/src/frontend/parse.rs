//! Recursive-descent readers for problem files, formulas and witness files.

use std::collections::{BTreeMap, BTreeSet};

use crate::logic::{name, Clause, Formula, Head, Literal, Name, PredExpr, PredSubst, Term};
use crate::saturation::PVarDecl;

use super::lexer::{tokenize, Spanned, Tok};
use super::{FrontendError, Problem};

/// Arity bookkeeping for symbols seen so far.
#[derive(Clone, Debug, Default)]
pub(crate) struct Symbols {
    pub funcs: BTreeMap<Name, usize>,
    pub preds: BTreeMap<Name, usize>,
    pub pvars: BTreeMap<Name, usize>,
}

impl Symbols {
    pub fn from_problem(p: &Problem) -> Self {
        let mut s = Symbols::default();
        s.funcs.extend(p.signature.funcs.iter().cloned());
        s.preds.extend(p.signature.preds.iter().cloned());
        s.pvars.extend(p.xs.iter().map(|d| (d.name.clone(), d.arity)));
        s
    }

    fn note(map: &mut BTreeMap<Name, usize>, sym: &Name, arity: usize, line: usize) -> Result<(), FrontendError> {
        match map.get(sym) {
            Some(&a) if a != arity => {
                Err(FrontendError::ArityConflict { symbol: sym.to_string(), first: a, second: arity, line })
            }
            Some(_) => Ok(()),
            None => {
                map.insert(sym.clone(), arity);
                Ok(())
            }
        }
    }

    fn function(&mut self, f: &Name, arity: usize, line: usize) -> Result<(), FrontendError> {
        if is_generated_constant(f) {
            return Err(FrontendError::ReservedSymbol { symbol: f.to_string(), line });
        }
        if self.pvars.contains_key(f) {
            return Err(FrontendError::PVarAsFunction { symbol: f.to_string(), line });
        }
        if self.preds.contains_key(f) {
            return Err(FrontendError::KindConflict { symbol: f.to_string(), line });
        }
        Self::note(&mut self.funcs, f, arity, line)
    }

    fn predicate(&mut self, p: &Name, arity: usize, line: usize) -> Result<(), FrontendError> {
        if let Some(&a) = self.pvars.get(p) {
            if a != arity {
                return Err(FrontendError::ArityConflict { symbol: p.to_string(), first: a, second: arity, line });
            }
            return Ok(());
        }
        if self.funcs.contains_key(p) {
            return Err(FrontendError::KindConflict { symbol: p.to_string(), line });
        }
        Self::note(&mut self.preds, p, arity, line)
    }
}

/// Names of the form `_c0, _c1, …` stand for the fresh constants of the
/// bottom-up closures and may not occur in input.
fn is_generated_constant(f: &str) -> bool {
    f.strip_prefix("_c").is_some_and(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
}

pub(crate) struct Parser<'s> {
    toks: Vec<Spanned>,
    pos: usize,
    /// Position reported at end of input.
    end: (usize, usize),
    pub symbols: &'s mut Symbols,
    /// Bound first-order variables (innermost last).
    bound: Vec<Name>,
    /// Bound fixpoint predicate variables with arities.
    bound_preds: Vec<(Name, usize)>,
}

impl<'s> Parser<'s> {
    pub fn new(text: &str, first_line: usize, symbols: &'s mut Symbols) -> Result<Self, FrontendError> {
        let toks = tokenize(text, first_line)?;
        let last_line = first_line + text.lines().count().saturating_sub(1);
        let last_col = text.lines().last().map_or(0, |l| l.chars().count()) + 1;
        Ok(Parser { toks, pos: 0, end: (last_line, last_col), symbols, bound: Vec::new(), bound_preds: Vec::new() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map_or(self.end, |t| (t.line, t.col))
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn error(&self, msg: impl Into<String>) -> FrontendError {
        let (line, col) = self.here();
        FrontendError::syntax(line, col, msg)
    }

    fn unexpected(&self, wanted: &str) -> FrontendError {
        match self.peek() {
            Some(t) => self.error(format!("expected {wanted}, found {}", t.describe())),
            None => self.error(format!("expected {wanted}, found end of input")),
        }
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok, wanted: &str) -> Result<(), FrontendError> {
        if self.eat(&t) {
            Ok(())
        } else {
            Err(self.unexpected(wanted))
        }
    }

    fn ident(&mut self, wanted: &str) -> Result<String, FrontendError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.unexpected(wanted)),
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw)
    }

    pub fn expect_end(&self) -> Result<(), FrontendError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.unexpected("end of line"))
        }
    }

    // ----- terms ---------------------------------------------------------

    fn term(&mut self) -> Result<Term, FrontendError> {
        let (line, _) = self.here();
        match self.peek().cloned() {
            Some(Tok::Var(v)) => {
                self.pos += 1;
                Ok(Term::Var(name(&v)))
            }
            Some(Tok::Ident(f)) => {
                self.pos += 1;
                let f = name(&f);
                if self.peek() == Some(&Tok::LParen) {
                    let args = self.term_list()?;
                    self.symbols.function(&f, args.len(), line)?;
                    Ok(Term::App(f, args))
                } else if self.bound.contains(&f) {
                    Ok(Term::Var(f))
                } else {
                    self.symbols.function(&f, 0, line)?;
                    Ok(Term::App(f, Vec::new()))
                }
            }
            _ => Err(self.unexpected("a term")),
        }
    }

    fn term_list(&mut self) -> Result<Vec<Term>, FrontendError> {
        self.expect(Tok::LParen, "`(`")?;
        let mut args = Vec::new();
        if self.eat(&Tok::RParen) {
            return Ok(args);
        }
        loop {
            args.push(self.term()?);
            if self.eat(&Tok::RParen) {
                return Ok(args);
            }
            self.expect(Tok::Comma, "`,` or `)`")?;
        }
    }

    /// A predicate head with its arguments; the head kind depends on scope.
    fn atom_head(&mut self, p: &str, args: &[Term], line: usize) -> Result<Head, FrontendError> {
        let p = name(p);
        if let Some((_, a)) = self.bound_preds.iter().rev().find(|(y, _)| *y == p) {
            if *a != args.len() {
                return Err(FrontendError::ArityConflict { symbol: p.to_string(), first: *a, second: args.len(), line });
            }
            return Ok(Head::PVar(p));
        }
        self.symbols.predicate(&p, args.len(), line)?;
        Ok(if self.symbols.pvars.contains_key(&p) { Head::PVar(p) } else { Head::Pred(p) })
    }

    // ----- clauses -------------------------------------------------------

    fn literal(&mut self) -> Result<Literal, FrontendError> {
        let (line, _) = self.here();
        let negated = self.eat(&Tok::Tilde);
        let lhs_is_pred_call = matches!((self.peek(), self.peek_at(1)), (Some(Tok::Ident(_)), _));
        if negated || lhs_is_pred_call {
            // Either an atom or the left side of an equation.
            let save = self.pos;
            if let Some(Tok::Ident(p)) = self.peek().cloned() {
                self.pos += 1;
                let args = if self.peek() == Some(&Tok::LParen) { self.term_list()? } else { Vec::new() };
                if !matches!(self.peek(), Some(Tok::Eq | Tok::Neq)) {
                    let head = self.atom_head(&p, &args, line)?;
                    return Ok(Literal::new(!negated, head, args));
                }
                self.pos = save;
            }
            if negated {
                return Err(self.unexpected("an atom after `~`"));
            }
        }
        let s = self.term()?;
        let positive = match self.peek() {
            Some(Tok::Eq) => true,
            Some(Tok::Neq) => false,
            _ => return Err(self.unexpected("`=` or `!=`")),
        };
        self.pos += 1;
        let t = self.term()?;
        Ok(Literal::new(positive, Head::Eq, vec![s, t]))
    }

    /// `lit | lit | …` with an optional trailing `.`; `false` is the empty clause.
    pub fn clause(&mut self) -> Result<Clause, FrontendError> {
        if self.is_keyword("false") && matches!(self.peek_at(1), None | Some(Tok::Dot)) {
            self.pos += 1;
            self.eat(&Tok::Dot);
            return Ok(Clause::empty());
        }
        let mut lits = vec![self.literal()?];
        while self.eat(&Tok::Pipe) {
            lits.push(self.literal()?);
        }
        self.eat(&Tok::Dot);
        Ok(Clause::new(lits))
    }

    /// `X/1, Y/2.`
    fn pvar_decls(&mut self) -> Result<Vec<(Name, usize, usize)>, FrontendError> {
        let mut out = Vec::new();
        loop {
            let (line, _) = self.here();
            let x = self.ident("a predicate variable")?;
            self.expect(Tok::Slash, "`/` and an arity")?;
            let arity = match self.peek() {
                Some(Tok::Number(n)) => *n,
                _ => return Err(self.unexpected("an arity")),
            };
            self.pos += 1;
            out.push((name(&x), arity, line));
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.eat(&Tok::Dot);
        Ok(out)
    }

    // ----- formulas ------------------------------------------------------

    pub fn formula(&mut self) -> Result<Formula, FrontendError> {
        let lhs = self.implication()?;
        if self.eat(&Tok::Iff) {
            let rhs = self.formula()?;
            return Ok(Formula::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula, FrontendError> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Implies) {
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, FrontendError> {
        let mut parts = vec![self.conjunction()?];
        while self.eat(&Tok::Or) {
            parts.push(self.conjunction()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Formula::Or(parts) })
    }

    fn conjunction(&mut self) -> Result<Formula, FrontendError> {
        let mut parts = vec![self.unary()?];
        while self.eat(&Tok::And) {
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Formula::And(parts) })
    }

    fn binder_vars(&mut self) -> Result<Vec<Name>, FrontendError> {
        let mut vars = Vec::new();
        loop {
            match self.peek().cloned() {
                Some(Tok::Ident(v)) | Some(Tok::Var(v)) => {
                    self.pos += 1;
                    vars.push(name(&v));
                }
                Some(Tok::Dot) => {
                    self.pos += 1;
                    return Ok(vars);
                }
                _ => return Err(self.unexpected("a bound variable or `.`")),
            }
        }
    }

    fn unary(&mut self) -> Result<Formula, FrontendError> {
        if self.eat(&Tok::Tilde) {
            return Ok(Formula::not(self.unary()?));
        }
        if self.is_keyword("forall") || self.is_keyword("exists") {
            let is_forall = self.is_keyword("forall");
            self.pos += 1;
            let vars = self.binder_vars()?;
            if vars.is_empty() {
                return Err(self.error("a quantifier needs at least one variable"));
            }
            let depth = self.bound.len();
            self.bound.extend(vars.iter().cloned());
            let body = self.formula();
            self.bound.truncate(depth);
            let body = body?;
            return Ok(vars.into_iter().rev().fold(body, |acc, v| {
                if is_forall {
                    Formula::forall(v, acc)
                } else {
                    Formula::exists(v, acc)
                }
            }));
        }
        if self.is_keyword("gfp") {
            self.pos += 1;
            let y = name(&self.ident("a fixpoint predicate name")?);
            let vars = self.binder_vars()?;
            let depth = self.bound.len();
            self.bound.extend(vars.iter().cloned());
            self.bound_preds.push((y.clone(), vars.len()));
            let body = self.formula();
            self.bound_preds.pop();
            self.bound.truncate(depth);
            let body = body?;
            self.expect(Tok::At, "`@` and the fixpoint arguments")?;
            let args = self.term_list()?;
            if args.len() != vars.len() {
                let (line, _) = self.here();
                return Err(FrontendError::ArityConflict { symbol: y.to_string(), first: vars.len(), second: args.len(), line });
            }
            return Ok(Formula::gfp(y, vars, body, args));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Formula, FrontendError> {
        if self.eat(&Tok::LParen) {
            let f = self.formula()?;
            self.expect(Tok::RParen, "`)`")?;
            return Ok(f);
        }
        if self.is_keyword("true") {
            self.pos += 1;
            return Ok(Formula::True);
        }
        if self.is_keyword("false") {
            self.pos += 1;
            return Ok(Formula::False);
        }
        let (line, _) = self.here();
        let save = self.pos;
        if let Some(Tok::Ident(p)) = self.peek().cloned() {
            let is_var = self.bound.iter().any(|v| **v == *p) && self.peek_at(1) != Some(&Tok::LParen);
            if !is_var {
                self.pos += 1;
                let args = if self.peek() == Some(&Tok::LParen) { self.term_list()? } else { Vec::new() };
                if !matches!(self.peek(), Some(Tok::Eq | Tok::Neq)) {
                    let head = self.atom_head(&p, &args, line)?;
                    return Ok(Formula::Atom(head, args));
                }
                self.pos = save;
            }
        }
        let s = self.term()?;
        let positive = match self.peek() {
            Some(Tok::Eq) => true,
            Some(Tok::Neq) => false,
            _ => return Err(self.unexpected("`=` or `!=`")),
        };
        self.pos += 1;
        let t = self.term()?;
        let eq = Formula::eq(s, t);
        Ok(if positive { eq } else { Formula::not(eq) })
    }

    /// `X := lambda u v. body`
    fn binding(&mut self) -> Result<(Name, PredExpr, usize), FrontendError> {
        let (line, _) = self.here();
        let x = name(&self.ident("a predicate variable")?);
        self.expect(Tok::Assign, "`:=`")?;
        if !self.is_keyword("lambda") {
            return Err(self.unexpected("`lambda`"));
        }
        self.pos += 1;
        let vars = self.binder_vars()?;
        let depth = self.bound.len();
        self.bound.extend(vars.iter().cloned());
        let body = self.formula();
        self.bound.truncate(depth);
        Ok((x, PredExpr::new(vars, body?), line))
    }
}

/// Splits a line into its leading keyword and the remaining text (column-aware).
fn strip_keyword<'a>(line: &'a str, kw: &str) -> Option<(&'a str, usize)> {
    let trimmed = line.trim_start();
    let indent = line.len() - trimmed.len();
    let rest = trimmed.strip_prefix(kw)?;
    if rest.chars().next().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
        return None;
    }
    Some((rest, indent + kw.len()))
}

/// Blanks out the first `n` bytes so that columns stay aligned.
fn pad(n: usize, rest: &str) -> String {
    format!("{}{}", " ".repeat(n), rest)
}

fn is_blank(line: &str) -> bool {
    let code = line.split('#').next().unwrap_or("");
    code.trim().is_empty()
}

/// Parses the problem file format.
pub fn parse_problem(text: &str) -> Result<Problem, FrontendError> {
    let mut symbols = Symbols::default();
    let mut xs: Vec<PVarDecl> = Vec::new();
    // First pass: predicate-variable declarations, wherever they appear.
    for (i, line) in text.lines().enumerate() {
        if let Some((rest, skip)) = strip_keyword(line, "exists") {
            let mut p = Parser::new(&pad(skip, rest), i + 1, &mut symbols)?;
            let decls = p.pvar_decls()?;
            p.expect_end()?;
            for (x, arity, line) in decls {
                match symbols.pvars.get(&x) {
                    Some(&a) if a != arity => {
                        return Err(FrontendError::ArityConflict { symbol: x.to_string(), first: a, second: arity, line })
                    }
                    Some(_) => {}
                    None => {
                        symbols.pvars.insert(x.clone(), arity);
                        xs.push(PVarDecl::new(x, arity));
                    }
                }
            }
        }
    }
    let mut clauses = Vec::new();
    let mut theory = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if is_blank(line) || strip_keyword(line, "exists").is_some() {
            continue;
        }
        let (src, is_theory) = match strip_keyword(line, "theory") {
            Some((rest, skip)) => (pad(skip, rest), true),
            None => (line.to_string(), false),
        };
        let mut p = Parser::new(&src, i + 1, &mut symbols)?;
        let c = p.clause()?;
        p.expect_end()?;
        if is_theory {
            if let Some(x) = c.pvars().into_iter().next() {
                return Err(FrontendError::TheoryMentionsPVar { pvar: x.to_string(), line: i + 1 });
            }
            theory.push(c);
        } else {
            clauses.push(c);
        }
    }
    Ok(Problem::from_parts(xs, clauses, theory))
}

/// Parses a closed formula; `xs` are treated as predicate variables.
pub fn parse_formula(text: &str, xs: &[PVarDecl]) -> Result<Formula, FrontendError> {
    let mut symbols = Symbols::default();
    symbols.pvars.extend(xs.iter().map(|d| (d.name.clone(), d.arity)));
    let mut p = Parser::new(text, 1, &mut symbols)?;
    let f = p.formula()?;
    p.eat(&Tok::Dot);
    p.expect_end()?;
    Ok(f)
}

/// Parses clause lines (one per line, no directives), e.g. a conclusion file.
pub fn parse_clauses(text: &str) -> Result<Vec<Clause>, FrontendError> {
    let p = parse_problem(text)?;
    let mut out = p.clauses;
    out.extend(p.theory);
    Ok(out)
}

/// Parses a witness file (`X := lambda u. body`, one or more bindings) against
/// the problem's signature and predicate variables.
pub fn parse_witness(text: &str, problem: &Problem) -> Result<PredSubst, FrontendError> {
    let mut symbols = Symbols::from_problem(problem);
    // Witness bodies may not mention the eliminated variables.
    let declared: BTreeMap<Name, usize> = std::mem::take(&mut symbols.pvars);
    let mut p = Parser::new(text, 1, &mut symbols)?;
    let mut subst = PredSubst::new();
    let mut seen = BTreeSet::new();
    while !p.at_end() {
        let (x, e, line) = p.binding()?;
        p.eat(&Tok::Semi);
        let arity = *declared.get(&x).ok_or_else(|| FrontendError::UnknownPVar { pvar: x.to_string(), line })?;
        if e.arity() != arity {
            return Err(FrontendError::ArityConflict { symbol: x.to_string(), first: arity, second: e.arity(), line });
        }
        if !seen.insert(x.clone()) {
            return Err(FrontendError::DuplicateBinding { pvar: x.to_string(), line });
        }
        subst.bind(x, e);
    }
    Ok(subst)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MAIN: &str = "exists X/1.\nB(a, ?v)\nX(a)\nB(?u,?v) | ~X(?u) | X(?v)\n~X(c)\n";

    #[test]
    fn main_example_file() {
        let p = parse_problem(MAIN).unwrap();
        assert_eq!(p.clauses.len(), 4);
        assert_eq!(p.xs, vec![PVarDecl::new(name("X"), 1)]);
        assert_eq!(p.clauses[2].to_string(), "B(u0, u1) ∨ ~X(u0) ∨ X(u1)");
        assert!(p.signature.preds.contains(&(name("B"), 2)));
        assert!(!p.signature.preds.iter().any(|(n, _)| &**n == "X"));
    }

    #[test]
    fn equality_literals() {
        let p = parse_problem("?u = a | f(?u) != b.\n").unwrap();
        let c = &p.clauses[0];
        assert_eq!(c.len(), 2);
        assert!(c.literals().iter().all(Literal::is_equality));
    }

    #[test]
    fn arity_conflict() {
        let e = parse_problem("B(?u)\nB(?u, ?v)\n").unwrap_err();
        assert!(matches!(e, FrontendError::ArityConflict { line: 2, .. }), "{e}");
    }

    #[test]
    fn pvar_as_function_rejected() {
        let e = parse_problem("exists X/1.\nB(X)\n").unwrap_err();
        assert!(matches!(e, FrontendError::PVarAsFunction { .. }), "{e}");
    }

    #[test]
    fn generated_constant_names_rejected() {
        let e = parse_problem("exists X/1.\nX(_c0)\n").unwrap_err();
        assert!(matches!(e, FrontendError::ReservedSymbol { line: 2, .. }), "{e}");
        assert!(parse_problem("exists X/1.\nX(_c)\nX(_cx1)\n").is_ok());
    }

    #[test]
    fn syntax_error_position() {
        let e = parse_problem("exists X/1.\nX(a) | | B(a)\n").unwrap_err();
        assert_eq!(e.to_string(), "line 2, column 8: expected a term, found `|`");
    }

    #[test]
    fn theory_lines() {
        let p = parse_problem("exists X/1.\ntheory a != b\nX(a)\n").unwrap();
        assert_eq!(p.theory.len(), 1);
        let e = parse_problem("exists X/1.\ntheory X(a)\n").unwrap_err();
        assert!(matches!(e, FrontendError::TheoryMentionsPVar { .. }));
    }

    #[test]
    fn formulas_round_trip_through_display() {
        let texts = [
            "(u = a) /\\ forall v. B(u, v)",
            "forall u. B(u, u) -> (u != a \\/ ~C(u))",
            "gfp Y u. C(u) /\\ forall v. ~B(u, v) \\/ Y(v) @ (a)",
            "~(B(a, a) <-> C(a))",
        ];
        for t in texts {
            let f = parse_formula(t, &[]).unwrap();
            let g = parse_formula(&f.to_string(), &[]).unwrap();
            assert_eq!(f, g, "{t}");
        }
        let f = parse_formula("forall u. u = a", &[]).unwrap();
        assert_eq!(f.free_vars().len(), 0);
    }

    #[test]
    fn witness_file() {
        let p = parse_problem(MAIN).unwrap();
        let s = parse_witness("X := lambda u. ?u = a\n", &p).unwrap();
        assert_eq!(s.get("X").unwrap().to_string(), "lambda u. u = a");
        let e = parse_witness("X := lambda u v. u = v\n", &p).unwrap_err();
        assert!(matches!(e, FrontendError::ArityConflict { .. }));
        let e = parse_witness("Z := lambda u. true\n", &p).unwrap_err();
        assert!(matches!(e, FrontendError::UnknownPVar { .. }));
    }
}
