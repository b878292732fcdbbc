//! Witness checking: a prover check of `conclusion ⊢ Nσ` (first-order
//! witnesses only) and an exhaustive finite-model comparison of `∃X̄ N` with `Nσ`.

use std::fmt;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::logic::{apply_pred_subst_clause, simplify, Clause, Formula};
use crate::saturation::PVarDecl;
use crate::witness::Witness;

use super::model::{size_bound, EnumLimits, Env, ModelIter, Signature};
use super::prover::{prove, ProverLimits, ProverResult};
use super::soqe::soqe_holds;

#[derive(Clone, Copy, Debug)]
pub struct CheckOptions {
    /// Overall time budget, shared by both checks.
    pub timeout: Duration,
    pub prover: ProverLimits,
    pub models: EnumLimits,
    pub run_prover: bool,
    pub run_models: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            timeout: Duration::from_secs(10),
            prover: ProverLimits { timeout: Duration::from_secs(2), ..ProverLimits::default() },
            models: EnumLimits::default(),
            run_prover: true,
            run_models: true,
        }
    }
}

/// Outcome of one check.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Ran but could not decide (prover budget, enumeration limits, timeout).
    Unknown,
    /// Not applicable (for example, prover check of a fixpoint witness).
    Skipped,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Unknown => "unknown",
            CheckStatus::Skipped => "skipped",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ProverCheck {
    pub status: CheckStatus,
    /// One entry per clause of `N`: the goal and the prover outcome.
    pub goals: Vec<(String, String)>,
    pub note: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ModelCheck {
    pub status: CheckStatus,
    pub max_size: usize,
    pub models: usize,
    /// A model on which `∃X̄ N` and `Nσ` disagree.
    pub counterexample: Option<String>,
    pub note: String,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub verdict: Verdict,
    pub prover: ProverCheck,
    pub models: ModelCheck,
    /// True when only finite-model evidence is available (fixpoint witnesses).
    pub model_evidence_only: bool,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "verification: {}", self.verdict)?;
        write!(f, "  prover: {}", self.prover.status)?;
        if !self.prover.note.is_empty() {
            write!(f, " ({})", self.prover.note)?;
        }
        writeln!(f)?;
        write!(f, "  models: {} ({} models, size <= {})", self.models.status, self.models.models, self.models.max_size)?;
        if !self.models.note.is_empty() {
            write!(f, " ({})", self.models.note)?;
        }
        writeln!(f)?;
        if let Some(m) = &self.models.counterexample {
            writeln!(f, "  disagreement on:")?;
            for line in m.lines() {
                writeln!(f, "    {line}")?;
            }
        }
        if self.model_evidence_only {
            writeln!(f, "  note: fixpoint witness; only finite-model evidence is available")?;
        }
        Ok(())
    }
}

/// Checks that `w` is a witness for `∃X̄ N`, given the derivation's conclusion.
pub fn check_witness(n: &[Clause], xs: &[PVarDecl], conclusion: &[Clause], w: &Witness, opts: &CheckOptions) -> CheckReport {
    let deadline = Instant::now() + opts.timeout;
    let instantiated: Result<Vec<Formula>, _> =
        n.iter().map(|c| apply_pred_subst_clause(c, &w.subst).map(|f| simplify(&f))).collect();
    let instantiated = match instantiated {
        Ok(fs) => fs,
        Err(e) => {
            let note = format!("witness application failed: {e}");
            return CheckReport {
                verdict: Verdict::Fail,
                prover: ProverCheck { status: CheckStatus::Fail, goals: Vec::new(), note: note.clone() },
                models: ModelCheck { status: CheckStatus::Skipped, max_size: 0, models: 0, counterexample: None, note },
                model_evidence_only: false,
            };
        }
    };
    let first_order = instantiated.iter().all(|f| !f.contains_gfp());

    let prover = if !opts.run_prover {
        ProverCheck { status: CheckStatus::Skipped, goals: Vec::new(), note: "disabled".into() }
    } else if !first_order {
        ProverCheck { status: CheckStatus::Skipped, goals: Vec::new(), note: "fixpoint witness".into() }
    } else {
        prover_check(conclusion, &instantiated, opts, deadline)
    };
    let models = if opts.run_models {
        model_check(n, xs, &instantiated, opts, deadline)
    } else {
        ModelCheck { status: CheckStatus::Skipped, max_size: 0, models: 0, counterexample: None, note: "disabled".into() }
    };

    let statuses = [prover.status, models.status];
    let verdict = if statuses.contains(&CheckStatus::Fail) {
        Verdict::Fail
    } else if statuses.contains(&CheckStatus::Pass) {
        Verdict::Pass
    } else {
        Verdict::Inconclusive
    };
    CheckReport { verdict, prover, models, model_evidence_only: !first_order }
}

fn prover_check(conclusion: &[Clause], goals: &[Formula], opts: &CheckOptions, deadline: Instant) -> ProverCheck {
    let mut status = CheckStatus::Pass;
    let mut out = Vec::new();
    for g in goals {
        let remaining = deadline.saturating_duration_since(Instant::now());
        let limits = ProverLimits { timeout: opts.prover.timeout.min(remaining), ..opts.prover };
        let result = prove(conclusion, g, &limits);
        let label = match &result {
            ProverResult::Proved(p) => format!("proved ({} lines)", p.lines.len()),
            ProverResult::Disproved(_) => {
                status = CheckStatus::Fail;
                "disproved by a finite countermodel".to_string()
            }
            ProverResult::Unknown(why) => {
                if status == CheckStatus::Pass {
                    status = CheckStatus::Unknown;
                }
                format!("unknown: {why}")
            }
        };
        out.push((g.to_string(), label));
    }
    let note = match status {
        CheckStatus::Pass => format!("{} goal(s) proved", out.len()),
        _ => out.iter().filter(|(_, r)| !r.starts_with("proved")).map(|(g, r)| format!("{g}: {r}")).collect::<Vec<_>>().join("; "),
    };
    ProverCheck { status, goals: out, note }
}

fn model_check(n: &[Clause], xs: &[PVarDecl], inst: &[Formula], opts: &CheckOptions, deadline: Instant) -> ModelCheck {
    let mut sig = Signature::of_clauses(n);
    for f in inst {
        sig.add_formula(f);
    }
    // Predicate variables are quantified, not interpreted by the model.
    sig.preds.retain(|(p, _)| !xs.iter().any(|d| &d.name == p));
    let max_size = size_bound(&sig, opts.models.max_size);
    let mut count = 0;
    let mut note = String::new();
    let mut status = CheckStatus::Pass;
    let mut reached = 0;
    for m in ModelIter::new(&sig, max_size) {
        if count >= opts.models.max_models {
            note = format!("stopped after {count} models");
            break;
        }
        if Instant::now() > deadline {
            note = format!("timed out after {count} models");
            break;
        }
        let lhs = match soqe_holds(&m, n, xs) {
            Ok(b) => b,
            Err(e) => {
                note = format!("size {}: {e}", m.size());
                break;
            }
        };
        let mut env = Env::new();
        let rhs = inst.iter().try_fold(true, |acc, f| Ok::<_, super::VerifyError>(acc && m.eval(&mut env, f)?));
        let rhs = match rhs {
            Ok(b) => b,
            Err(e) => {
                note = e.to_string();
                status = CheckStatus::Unknown;
                break;
            }
        };
        count += 1;
        reached = reached.max(m.size());
        if lhs != rhs {
            return ModelCheck {
                status: CheckStatus::Fail,
                max_size: reached,
                models: count,
                counterexample: Some(format!("{}\nexists X. N is {lhs}, N under the witness is {rhs}", m.to_string().trim_end())),
                note: String::new(),
            };
        }
    }
    if count == 0 {
        status = CheckStatus::Unknown;
    }
    ModelCheck { status, max_size: reached, models: count, counterexample: None, note }
}
