//! Subcommand implementations other than `bench`.

use std::path::Path;

use anyhow::{Context, Result};
use serde_json::json;

use wscan::frontend::{encode_graph as encode, parse_clauses, parse_formula, parse_graph, parse_witness};
use wscan::logic::Clause;
use wscan::saturation::{replay_trace, search, SearchLimits};
use wscan::verify::{check_witness, prove as run_prover, ProverLimits, ProverResult, Verdict};
use wscan::witness::Witness;

use crate::pipeline::{check_options, load_problem, print_solutions, process, read, witness_options};
use crate::{CheckArgs, Format, Outcome, ProveArgs, ReplayArgs, SolveArgs};

fn outcome_of(ok: bool) -> Outcome {
    if ok {
        Outcome::Ok
    } else {
        Outcome::VerificationFailed
    }
}

pub fn solve(a: &SolveArgs) -> Result<Outcome> {
    let p = load_problem(&a.file)?;
    let limits = SearchLimits { max_steps: a.max_steps, timeout: a.witness.timeout, seed: a.seed, ..SearchLimits::default() };
    let mut s = search(p.clauses.clone(), p.xs.clone(), limits);
    let derivations: Vec<_> = s.by_ref().take(a.all.max(1)).collect();
    if derivations.is_empty() {
        let st = s.stats();
        let msg = format!(
            "no eliminating derivation within limits ({} branches, {} diverged, {} too long{})",
            st.branches,
            st.diverged,
            st.too_long,
            if st.timed_out { ", timed out" } else { "" }
        );
        match a.witness.format {
            Format::Text => println!("status: unsolved\n{msg}"),
            Format::Json => println!("{}", serde_json::to_string_pretty(&json!({"status": "unsolved", "message": msg}))?),
        }
        return Ok(Outcome::NoDerivation);
    }
    let wopts = witness_options(&a.witness);
    let verify = a.verify.then_some(a.witness.timeout);
    let sols: Vec<_> = derivations.into_iter().map(|d| process(d, &p, &wopts, verify)).collect();
    let ok = sols.iter().all(|s| s.succeeded());
    if a.witness.format == Format::Text {
        println!("status: solved");
    }
    print_solutions(&sols, a.witness.format, a.trace, json!({"status": "solved"}))?;
    Ok(outcome_of(ok))
}

pub fn replay(a: &ReplayArgs) -> Result<Outcome> {
    let p = load_problem(&a.problem)?;
    let trace = read(&a.trace)?;
    let d = replay_trace(p.clauses.clone(), p.xs.clone(), &trace).with_context(|| format!("{}", a.trace.display()))?;
    if !d.is_eliminating() {
        println!("the trace replays but does not eliminate all predicate variables; current clauses:");
        for (id, c) in d.current() {
            println!("  {id}: {}", c.to_problem_string());
        }
        return Ok(Outcome::NoDerivation);
    }
    let wopts = witness_options(&a.witness);
    let verify = (!a.no_verify).then_some(a.witness.timeout);
    let sol = process(d, &p, &wopts, verify);
    let ok = sol.succeeded();
    print_solutions(std::slice::from_ref(&sol), a.witness.format, true, json!({"status": "replayed"}))?;
    Ok(outcome_of(ok))
}

pub fn check(a: &CheckArgs) -> Result<Outcome> {
    let p = load_problem(&a.problem)?;
    let subst = parse_witness(&read(&a.witness)?, &p).with_context(|| format!("{}", a.witness.display()))?;
    let conclusion: Vec<Clause> = match &a.conclusion {
        Some(path) => parse_clauses(&read(path)?).with_context(|| format!("{}", path.display()))?,
        None => {
            let limits =
                SearchLimits { max_steps: a.max_steps, timeout: a.witness_args.timeout, ..SearchLimits::default() };
            match search(p.clauses.clone(), p.xs.clone(), limits).next() {
                Some(d) => d.conclusion_set().into_iter().collect(),
                None => {
                    println!("no eliminating derivation within limits; give the conclusion with --conclusion");
                    return Ok(Outcome::NoDerivation);
                }
            }
        }
    };
    let w = Witness { subst, purdels: Vec::new() };
    let report = check_witness(&p.clauses, &p.xs, &conclusion, &w, &check_options(a.witness_args.timeout));
    match a.witness_args.format {
        Format::Text => print!("{report}"),
        Format::Json => println!("{}", serde_json::to_string_pretty(&report)?),
    }
    Ok(outcome_of(report.verdict != Verdict::Fail))
}

pub fn encode_graph(path: &Path) -> Result<Outcome> {
    let g = parse_graph(&read(path)?).with_context(|| format!("{}", path.display()))?;
    print!("{}", encode(&g));
    Ok(Outcome::Ok)
}

pub fn prove(a: &ProveArgs) -> Result<Outcome> {
    let premises = parse_clauses(&read(&a.premises)?).with_context(|| format!("{}", a.premises.display()))?;
    let goal = parse_formula(&read(&a.goal)?, &[]).with_context(|| format!("{}", a.goal.display()))?;
    let limits = ProverLimits { timeout: a.timeout, ..ProverLimits::default() };
    match run_prover(&premises, &goal, &limits) {
        ProverResult::Proved(proof) => {
            println!("proved");
            if a.proof {
                print!("{proof}");
            }
            Ok(Outcome::Ok)
        }
        ProverResult::Disproved(model) => {
            println!("disproved; countermodel:");
            print!("{model}");
            Ok(Outcome::VerificationFailed)
        }
        ProverResult::Unknown(why) => {
            println!("unknown: {why}");
            Ok(Outcome::NoDerivation)
        }
    }
}
