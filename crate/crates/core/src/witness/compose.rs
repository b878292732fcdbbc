//! Per-step substitutions and their composition into a derivation witness.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::logic::{Clause, Name, PointedClause, PredExpr, PredSubst, FreshNames};
use crate::saturation::{Derivation, Step, StepEffect};

use super::acyclic::{find_acyclic, AcyclicFailure, AcyclicLimits};
use super::closure::{b_k, clause_set_to_expr, gfp_expr, lres, make_alpha};
use super::WitnessError;

/// How purified clause deletions are turned into substitutions.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessMode {
    /// First-order when an acyclic purification subsumption exists, otherwise fixpoint.
    #[default]
    Auto,
    /// First-order only; fails if some deletion is not acyclically purified.
    FirstOrder,
    /// Greatest-fixpoint expressions throughout.
    Fixpoint,
    /// The bounded local resolution closure; fails when it does not stabilise.
    Resolution,
}

#[derive(Clone, Copy, Debug)]
pub struct WitnessOptions {
    pub mode: WitnessMode,
    /// Inference budget for the resolution mode.
    pub lres_budget: usize,
    /// Added to the minimal acyclicity bound (`f(i) = k_min + extra_k`).
    pub extra_k: usize,
    pub acyclic: AcyclicLimits,
}

impl Default for WitnessOptions {
    fn default() -> Self {
        WitnessOptions { mode: WitnessMode::Auto, lres_budget: 200, extra_k: 0, acyclic: AcyclicLimits::default() }
    }
}

/// Why a purified clause deletion received a fixpoint expression.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FixpointCause {
    Requested,
    Cyclic,
    SearchBudget,
}

/// The construction used for one purified clause deletion.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum PurDelMode {
    FirstOrder { k: usize },
    Fixpoint { cause: FixpointCause },
    Resolution { clauses: usize },
}

impl fmt::Display for PurDelMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PurDelMode::FirstOrder { k } => write!(f, "first-order (k = {k})"),
            PurDelMode::Fixpoint { cause: FixpointCause::Requested } => write!(f, "fixpoint"),
            PurDelMode::Fixpoint { cause: FixpointCause::Cyclic } => write!(f, "fixpoint (every purification subsumption is cyclic)"),
            PurDelMode::Fixpoint { cause: FixpointCause::SearchBudget } => write!(f, "fixpoint (acyclicity search budget exhausted)"),
            PurDelMode::Resolution { clauses } => write!(f, "resolution closure ({clauses} clauses)"),
        }
    }
}

/// The substitution chosen for the purified clause deletion at `step` (zero-based).
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct PurDelWitness {
    pub step: usize,
    pub x: String,
    pub mode: PurDelMode,
    pub tau: String,
}

/// A composed witness substitution with per-step provenance.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Witness {
    pub subst: PredSubst,
    pub purdels: Vec<PurDelWitness>,
}

impl Witness {
    pub fn identity() -> Self {
        Witness { subst: PredSubst::new(), purdels: Vec::new() }
    }

    /// True iff no bound expression contains a fixpoint.
    pub fn is_first_order(&self) -> bool {
        self.subst.iter().all(|(_, e)| !e.body.contains_gfp())
    }

    pub fn size(&self) -> usize {
        self.subst.size()
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (x, e) in self.subst.iter() {
            writeln!(f, "{x} := {e}")?;
        }
        Ok(())
    }
}

/// `τ` for a purified clause deletion of `p` in `rest` (the clause set after
/// deletion), together with the construction used.
pub fn tau_purdel(
    p: &PointedClause,
    rest: &[Clause],
    opts: &WitnessOptions,
    fresh: &mut FreshNames,
) -> Result<(PredSubst, PurDelMode), WitnessError> {
    let d = p.designated();
    let x = d.pvar_name().expect("designated literal of a predicate variable").clone();
    let arity = d.args.len();
    let fixpoint = |fresh: &mut FreshNames| {
        let y = fresh.fresh("Y");
        gfp_expr(&make_alpha(p, &y), &y)
    };
    let (w, mode) = match opts.mode {
        WitnessMode::Fixpoint => (fixpoint(fresh), PurDelMode::Fixpoint { cause: FixpointCause::Requested }),
        WitnessMode::Resolution => {
            let set = lres(p, opts.lres_budget)?;
            (clause_set_to_expr(&set, arity), PurDelMode::Resolution { clauses: set.len() })
        }
        WitnessMode::FirstOrder | WitnessMode::Auto => match find_acyclic(p, rest, opts.acyclic) {
            Ok(a) => {
                let k = a.longest_path + opts.extra_k;
                (clause_set_to_expr(&b_k(p, k), arity), PurDelMode::FirstOrder { k })
            }
            Err(fail) if opts.mode == WitnessMode::Auto && fail != AcyclicFailure::NotPurified => {
                let cause = if fail == AcyclicFailure::Cyclic { FixpointCause::Cyclic } else { FixpointCause::SearchBudget };
                (fixpoint(fresh), PurDelMode::Fixpoint { cause })
            }
            Err(fail) => {
                return Err(WitnessError::NotAcyclic { step: 0, reason: format!("{fail:?}").to_lowercase() });
            }
        },
    };
    let w = if d.positive { w.negated() } else { w };
    Ok((PredSubst::singleton(x, w.simplified().tidy()), mode))
}

fn derivation_names(d: &Derivation) -> BTreeSet<String> {
    let mut out: BTreeSet<String> = d.xs().iter().map(|x| x.name.to_string()).collect();
    for c in d.initial().values() {
        for l in c.literals() {
            if let Some(n) = l.head.name() {
                out.insert(n.to_string());
            }
        }
        for (f, _) in c.functions() {
            out.insert(f.to_string());
        }
    }
    out
}

/// `σ(D) = τ_{S₁} ⋯ τ_{S_m}`, folded right to left and simplified after each step.
pub fn compose(d: &Derivation, opts: &WitnessOptions) -> Result<Witness, WitnessError> {
    if !d.is_eliminating() {
        return Err(WitnessError::NotEliminating);
    }
    let mut fresh = FreshNames::avoiding(derivation_names(d));
    let mut sigma = PredSubst::new();
    let mut purdels = Vec::new();
    for (i, step) in d.steps().iter().enumerate().rev() {
        let tau = match (step, &d.effects()[i]) {
            (Step::ExtPurDel { x, positive }, _) => {
                let arity = d.arity_of(x).expect("declared predicate variable");
                let e = if *positive { PredExpr::top(arity) } else { PredExpr::bottom(arity) };
                PredSubst::singleton(x.clone(), e)
            }
            (Step::PurDel { .. }, StepEffect::Purified { pointed, .. }) => {
                let rest: Vec<Clause> = d.state(i + 1).values().cloned().collect();
                let (tau, mode) = tau_purdel(pointed, &rest, opts, &mut fresh).map_err(|e| match e {
                    WitnessError::NotAcyclic { reason, .. } => WitnessError::NotAcyclic { step: i + 1, reason },
                    other => WitnessError::Step { step: i + 1, source: Box::new(other) },
                })?;
                let x: &Name = pointed.designated().pvar_name().expect("predicate variable");
                purdels.push(PurDelWitness {
                    step: i,
                    x: x.to_string(),
                    mode,
                    tau: tau.get(x).map(|e| e.to_string()).unwrap_or_default(),
                });
                tau
            }
            _ => continue,
        };
        sigma = tau.then(&sigma)?.simplified();
    }
    purdels.reverse();
    Ok(Witness { subst: sigma, purdels })
}
