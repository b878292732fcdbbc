//! Shared steps: loading inputs, witness extraction, verification and rendering.

use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use anyhow::{Context, Result};
use serde_json::{json, Value};

use wscan::frontend::{merge_theory, parse_problem, Problem};
use wscan::logic::Clause;
use wscan::saturation::Derivation;
use wscan::verify::{check_witness, CheckOptions, CheckReport, ProverLimits};
use wscan::witness::{compose, Witness, WitnessOptions};

use crate::{Format, WitnessArgs};

pub fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

/// Reads a problem file and folds its background theory into the clause set.
pub fn load_problem(path: &Path) -> Result<Problem> {
    let text = read(path)?;
    let p = parse_problem(&text).with_context(|| format!("{}", path.display()))?;
    let merged = merge_theory(&p)?;
    Ok(merged.with_origin(path.display().to_string()))
}

pub fn witness_options(a: &WitnessArgs) -> WitnessOptions {
    WitnessOptions { mode: a.witness_mode.into(), lres_budget: a.lres_budget, extra_k: a.extra_k, ..WitnessOptions::default() }
}

pub fn check_options(timeout: Duration) -> CheckOptions {
    let per_goal = (timeout / 4).max(Duration::from_millis(200));
    CheckOptions { timeout, prover: ProverLimits { timeout: per_goal, ..ProverLimits::default() }, ..CheckOptions::default() }
}

/// Everything computed for one derivation.
pub struct Solution {
    pub derivation: Derivation,
    pub witness: Result<Witness, String>,
    pub report: Option<CheckReport>,
    pub witness_time: Duration,
    pub verify_time: Duration,
}

impl Solution {
    pub fn conclusion(&self) -> Vec<Clause> {
        self.derivation.conclusion_set().into_iter().collect()
    }

    /// False when witness extraction failed or verification reported a failure.
    pub fn succeeded(&self) -> bool {
        self.witness.is_ok() && self.report.as_ref().is_none_or(|r| r.verdict != wscan::verify::Verdict::Fail)
    }
}

pub fn process(d: Derivation, p: &Problem, wopts: &WitnessOptions, verify: Option<Duration>) -> Solution {
    let t0 = Instant::now();
    let witness = compose(&d, wopts).map_err(|e| e.to_string());
    let witness_time = t0.elapsed();
    let t1 = Instant::now();
    let report = match (&witness, verify) {
        (Ok(w), Some(timeout)) => {
            let conclusion: Vec<Clause> = d.conclusion_set().into_iter().collect();
            Some(check_witness(&p.clauses, &p.xs, &conclusion, w, &check_options(timeout)))
        }
        _ => None,
    };
    Solution { derivation: d, witness, report, witness_time, verify_time: t1.elapsed() }
}

fn indent(text: &str) -> String {
    text.lines().map(|l| format!("  {l}\n")).collect()
}

pub fn render_text(sol: &Solution, show_trace: bool) -> String {
    let mut out = String::from("conclusion:\n");
    let conclusion = sol.conclusion();
    if conclusion.is_empty() {
        out.push_str("  true\n");
    }
    for c in &conclusion {
        out.push_str(&format!("  {}\n", c.to_problem_string()));
    }
    if show_trace {
        out.push_str(&format!("trace ({} steps):\n", sol.derivation.steps().len()));
        out.push_str(&indent(&sol.derivation.to_trace()));
    }
    match &sol.witness {
        Ok(w) => {
            out.push_str("witness:\n");
            if w.subst.is_empty() {
                out.push_str("  identity\n");
            }
            out.push_str(&indent(&w.to_string()));
            for pd in &w.purdels {
                out.push_str(&format!("  # step {}: {} via {}\n", pd.step + 1, pd.x, pd.mode));
            }
        }
        Err(e) => out.push_str(&format!("witness: unavailable ({e})\n")),
    }
    if let Some(r) = &sol.report {
        out.push_str(&r.to_string());
    }
    out
}

pub fn render_json(sol: &Solution, show_trace: bool) -> Value {
    let conclusion: Vec<String> = sol.conclusion().iter().map(Clause::to_problem_string).collect();
    let mut v = json!({
        "conclusion": conclusion,
        "length": sol.derivation.counted_len(),
        "witness_ms": sol.witness_time.as_secs_f64() * 1000.0,
    });
    if show_trace {
        v["trace"] = json!(sol.derivation.to_trace());
    }
    match &sol.witness {
        Ok(w) => {
            let bindings: serde_json::Map<String, Value> =
                w.subst.iter().map(|(x, e)| (x.to_string(), json!(e.to_string()))).collect();
            v["witness"] = Value::Object(bindings);
            v["witness_text"] = json!(w.to_string());
            v["witness_size"] = json!(w.size());
            v["first_order"] = json!(w.is_first_order());
            v["purdels"] = w
                .purdels
                .iter()
                .map(|pd| json!({"step": pd.step + 1, "pvar": pd.x, "mode": pd.mode.to_string(), "tau": pd.tau}))
                .collect();
        }
        Err(e) => v["witness_error"] = json!(e),
    }
    if let Some(r) = &sol.report {
        v["verification"] = serde_json::to_value(r).unwrap_or(Value::Null);
        v["verify_ms"] = json!(sol.verify_time.as_secs_f64() * 1000.0);
    }
    v
}

pub fn print_solutions(sols: &[Solution], format: Format, show_trace: bool, header: Value) -> Result<()> {
    match format {
        Format::Text => {
            for (i, s) in sols.iter().enumerate() {
                if sols.len() > 1 {
                    println!("== derivation {} ==", i + 1);
                }
                print!("{}", render_text(s, show_trace));
            }
        }
        Format::Json => {
            let mut out = header;
            out["derivations"] = sols.iter().map(|s| render_json(s, show_trace)).collect();
            println!("{}", serde_json::to_string_pretty(&out)?);
        }
    }
    Ok(())
}
