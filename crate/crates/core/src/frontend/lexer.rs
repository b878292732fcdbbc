//! Tokenizer shared by the problem, formula, witness and graph readers.

use super::FrontendError;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Tok {
    Ident(String),
    /// `?name`
    Var(String),
    Number(usize),
    LParen,
    RParen,
    Comma,
    Pipe,
    Tilde,
    Eq,
    Neq,
    Dot,
    Slash,
    And,
    Or,
    Implies,
    Iff,
    At,
    Assign,
    Semi,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Var(s) => format!("variable `?{s}`"),
            Tok::Number(n) => format!("number `{n}`"),
            other => format!("`{}`", other.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Comma => ",",
            Tok::Pipe => "|",
            Tok::Tilde => "~",
            Tok::Eq => "=",
            Tok::Neq => "!=",
            Tok::Dot => ".",
            Tok::Slash => "/",
            Tok::And => "/\\",
            Tok::Or => "\\/",
            Tok::Implies => "->",
            Tok::Iff => "<->",
            Tok::At => "@",
            Tok::Assign => ":=",
            Tok::Semi => ";",
            Tok::Ident(_) | Tok::Var(_) | Tok::Number(_) => "",
        }
    }
}

/// A token with its one-based source position.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Tokenizes `text`; `#` starts a comment running to the end of the line.
/// `first_line` is the line number of the first line of `text`.
pub fn tokenize(text: &str, first_line: usize) -> Result<Vec<Spanned>, FrontendError> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let lineno = first_line + li;
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            let push = |out: &mut Vec<Spanned>, tok| out.push(Spanned { tok, line: lineno, col });
            let next = chars.get(i + 1).copied();
            match c {
                '#' => break,
                c if c.is_whitespace() => i += 1,
                c if is_ident_start(c) => {
                    let start = i;
                    while i < chars.len() && is_ident_char(chars[i]) {
                        i += 1;
                    }
                    push(&mut out, Tok::Ident(chars[start..i].iter().collect()));
                }
                c if c.is_ascii_digit() => {
                    let start = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    let s: String = chars[start..i].iter().collect();
                    let n = s.parse().map_err(|_| FrontendError::syntax(lineno, col, format!("number `{s}` is too large")))?;
                    push(&mut out, Tok::Number(n));
                }
                '?' => {
                    let start = i + 1;
                    i += 1;
                    if !chars.get(i).copied().is_some_and(is_ident_start) {
                        return Err(FrontendError::syntax(lineno, col, "expected a variable name after `?`"));
                    }
                    while i < chars.len() && is_ident_char(chars[i]) {
                        i += 1;
                    }
                    push(&mut out, Tok::Var(chars[start..i].iter().collect()));
                }
                _ => {
                    let (tok, len) = match (c, next) {
                        ('!', Some('=')) => (Tok::Neq, 2),
                        ('/', Some('\\')) => (Tok::And, 2),
                        ('\\', Some('/')) => (Tok::Or, 2),
                        ('-', Some('>')) => (Tok::Implies, 2),
                        ('<', Some('-')) if chars.get(i + 2) == Some(&'>') => (Tok::Iff, 3),
                        (':', Some('=')) => (Tok::Assign, 2),
                        ('(', _) => (Tok::LParen, 1),
                        (')', _) => (Tok::RParen, 1),
                        (',', _) => (Tok::Comma, 1),
                        ('|', _) => (Tok::Pipe, 1),
                        ('~', _) => (Tok::Tilde, 1),
                        ('=', _) => (Tok::Eq, 1),
                        ('.', _) => (Tok::Dot, 1),
                        ('/', _) => (Tok::Slash, 1),
                        ('@', _) => (Tok::At, 1),
                        (';', _) => (Tok::Semi, 1),
                        _ => return Err(FrontendError::syntax(lineno, col, format!("unexpected character `{c}`"))),
                    };
                    push(&mut out, tok);
                    i += len;
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_and_positions() {
        let toks = tokenize("B(?u,a) | ~X(?u) # note\nu != a", 1).unwrap();
        assert_eq!(toks[0].tok, Tok::Ident("B".into()));
        assert_eq!(toks[2].tok, Tok::Var("u".into()));
        assert_eq!((toks[6].line, toks[6].col), (1, 9));
        let last = &toks[toks.len() - 2];
        assert_eq!((last.tok.clone(), last.line, last.col), (Tok::Neq, 2, 3));
    }

    #[test]
    fn bad_character() {
        let e = tokenize("X(a) $", 3).unwrap_err();
        assert_eq!(e.to_string(), "line 3, column 6: unexpected character `$`");
    }
}
