//! Line-oriented derivation traces.
//!
//! ```text
//! res 2.1 4.1 -> 6
//! purdel 2.1
//! extpurdel X -
//! varelim 5 -> 7
//! redel 5 subsumed-by 1
//! redel 5 tautology
//! fac 3.1.2 -> 8
//! constrelim 5.1.2 -> 9
//! parmod 5.1:rl 7@1.2 -> 9
//! ```
//!
//! Literal indices and positions are one-based; `#` starts a comment.

use crate::calculus::Position;
use crate::logic::name;

use super::derivation::{ClauseId, RedReason, Step};
use super::SaturationError;

/// Parses a whole trace.
pub fn parse_trace(text: &str) -> Result<Vec<Step>, SaturationError> {
    let mut steps = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let step = parse_step(line).map_err(|message| SaturationError::TraceParse { line: i + 1, message })?;
        steps.push(step);
    }
    Ok(steps)
}

fn id(s: &str) -> Result<ClauseId, String> {
    s.parse::<ClauseId>().map_err(|_| format!("expected a clause identifier, found `{s}`"))
}

/// `id.k₁.k₂…` with one-based indices, returned zero-based.
fn dotted(s: &str) -> Result<(ClauseId, Vec<usize>), String> {
    let mut parts = s.split('.');
    let c = id(parts.next().unwrap_or(""))?;
    let mut idx = Vec::new();
    for p in parts {
        let n: usize = p.parse().map_err(|_| format!("expected a literal index in `{s}`"))?;
        if n == 0 {
            return Err(format!("literal indices start at 1 in `{s}`"));
        }
        idx.push(n - 1);
    }
    Ok((c, idx))
}

fn pointed(s: &str) -> Result<(ClauseId, usize), String> {
    match dotted(s)? {
        (c, v) if v.len() == 1 => Ok((c, v[0])),
        _ => Err(format!("expected `<id>.<literal>`, found `{s}`")),
    }
}

fn arrow_out(toks: &[&str], at: usize) -> Result<ClauseId, String> {
    match (toks.get(at), toks.get(at + 1), toks.len()) {
        (Some(&"->"), Some(o), n) if n == at + 2 => id(o),
        _ => Err("expected `-> <id>` at the end of the line".into()),
    }
}

/// Parses one trace line.
pub fn parse_step(line: &str) -> Result<Step, String> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    let kw = toks.first().copied().unwrap_or("");
    match kw {
        "res" => {
            let (p, p_lit) = pointed(toks.get(1).ok_or("missing premise")?)?;
            let (q, q_lit) = pointed(toks.get(2).ok_or("missing second premise")?)?;
            Ok(Step::Res { p, p_lit, q, q_lit, out: arrow_out(&toks, 3)? })
        }
        "fac" => {
            let (c, idx) = dotted(toks.get(1).ok_or("missing premise")?)?;
            if idx.len() != 2 {
                return Err("expected `fac <id>.<i>.<j>`".into());
            }
            Ok(Step::Fac { c, i: idx[0], j: idx[1], out: arrow_out(&toks, 2)? })
        }
        "constrelim" => {
            let (c, sel) = dotted(toks.get(1).ok_or("missing premise")?)?;
            if sel.is_empty() {
                return Err("expected `constrelim <id>.<i>…`".into());
            }
            Ok(Step::ConstrElim { c, sel, out: arrow_out(&toks, 2)? })
        }
        "parmod" => {
            let eq_tok = toks.get(1).ok_or("missing equation premise")?;
            let (eq_tok, flip) = match eq_tok.split_once(':') {
                Some((e, "rl")) => (e, Some(true)),
                Some((e, "lr")) => (e, Some(false)),
                Some(_) => return Err(format!("unknown orientation in `{eq_tok}`")),
                None => (*eq_tok, None),
            };
            let (eq, eq_lit) = pointed(eq_tok)?;
            let target = toks.get(2).ok_or("missing target premise")?;
            let (into, pos) = target.split_once('@').ok_or("expected `<id>@<position>`")?;
            let pos = Position::from_trace(pos).ok_or_else(|| format!("invalid position `{pos}`"))?;
            Ok(Step::ParMod { eq, eq_lit, flip, into: id(into)?, pos, out: arrow_out(&toks, 3)? })
        }
        "varelim" => {
            let c = id(toks.get(1).ok_or("missing premise")?)?;
            Ok(Step::VarElim { c, out: arrow_out(&toks, 2)? })
        }
        "redel" => {
            let c = id(toks.get(1).ok_or("missing clause")?)?;
            match (toks.get(2), toks.get(3), toks.len()) {
                (Some(&"tautology"), None, 3) => Ok(Step::RedDel { c, reason: RedReason::Tautology }),
                (Some(&"subsumed-by"), Some(d), 4) => Ok(Step::RedDel { c, reason: RedReason::SubsumedBy(id(d)?) }),
                _ => Err("expected `redel <id> tautology` or `redel <id> subsumed-by <id>`".into()),
            }
        }
        "extpurdel" => match (toks.get(1), toks.get(2), toks.len()) {
            (Some(x), Some(&"+"), 3) => Ok(Step::ExtPurDel { x: name(x), positive: true }),
            (Some(x), Some(&"-"), 3) => Ok(Step::ExtPurDel { x: name(x), positive: false }),
            _ => Err("expected `extpurdel <X> +|-`".into()),
        },
        "purdel" => match toks.len() {
            2 => {
                let (c, lit) = pointed(toks[1])?;
                Ok(Step::PurDel { c, lit })
            }
            _ => Err("expected `purdel <id>.<literal>`".into()),
        },
        other => Err(format!("unknown step `{other}`")),
    }
}
