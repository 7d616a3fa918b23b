//! Restricted variables, weak restriction, semi-safety and safety.
//!
//! Occurrence paths in reports are relative to the matrix. Polarity is the
//! same whether counted in the matrix or in the whole prenex sentence, since
//! the prefix contains no implication.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::formula::{polarity, Formula, OccurrencePath, Quantifier, Term};
use crate::prenex::{simplify, PrenexSentence};

/// `RV(F)` for a quantifier-free `F`.
pub fn restricted_vars(f: &Formula) -> BTreeSet<String> {
    match f {
        Formula::Bot | Formula::Implies(..) => BTreeSet::new(),
        Formula::Eq(Term::Var(_), Term::Var(_)) => BTreeSet::new(),
        Formula::Eq(..) | Formula::Pred { .. } => f.free_vars(),
        Formula::And(a, b) => &restricted_vars(a) | &restricted_vars(b),
        Formula::Or(a, b) => &restricted_vars(a) & &restricted_vars(b),
        // not reached for quantifier-free input; quantified variables are not restricted
        Formula::Forall(x, body) | Formula::Exists(x, body) => {
            let mut rv = restricted_vars(body);
            rv.remove(x);
            rv
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Restriction {
    Positive,
    Negative,
}

/// Replaces every atom restricting `x` by `⊥` and simplifies.
pub fn weak_restriction_residue(f: &Formula, x: &str) -> Formula {
    let replaced = f.map_bottom_up(&mut |g| match g {
        Formula::Pred { .. } | Formula::Eq(..) if restricted_vars(&g).contains(x) => Formula::Bot,
        other => other,
    });
    simplify(&replaced)
}

/// Whether `x` is positively (residue `⊤`) or negatively (residue `⊥`)
/// weakly restricted in `f`.
pub fn weakly_restricted(f: &Formula, x: &str, mode: Restriction) -> bool {
    let residue = weak_restriction_residue(f, x);
    match mode {
        Restriction::Positive => residue.is_top(),
        Restriction::Negative => residue.is_bot(),
    }
}

/// The innermost implication `G → H` containing the occurrence at `path`
/// whose antecedent restricts `x`.
fn semi_safety_guard(f: &Formula, x: &str, path: &OccurrencePath) -> Option<OccurrencePath> {
    let ancestors: Vec<OccurrencePath> = path.ancestors().collect();
    ancestors.into_iter().rev().find(|a| {
        matches!(f.node_at(a), Ok(crate::formula::Node::Formula(Formula::Implies(g, _)))
            if restricted_vars(g).contains(x))
    })
}

/// `NS(F)`: variables with a strictly positive occurrence that is not inside
/// any `G → H` with the variable restricted in `G`.
pub fn non_semi_safe_vars(f: &Formula) -> BTreeSet<String> {
    f.var_occurrences()
        .into_iter()
        .filter(|(x, path)| {
            let strictly = polarity(f, path).map(|p| p.strictly_positive).unwrap_or(false);
            strictly && semi_safety_guard(f, x, path).is_none()
        })
        .map(|(x, _)| x)
        .collect()
}

pub fn is_semi_safe(s: &PrenexSentence) -> bool {
    non_semi_safe_vars(&s.matrix).is_empty()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Verdict {
    Safe,
    SemiSafeOnly,
    Unsafe,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Safe => "safe",
            Verdict::SemiSafeOnly => "semiSafeOnly",
            Verdict::Unsafe => "unsafe",
        }
    }

    pub fn parse(text: &str) -> Option<Verdict> {
        match text {
            "safe" => Some(Verdict::Safe),
            "semiSafeOnly" => Some(Verdict::SemiSafeOnly),
            "unsafe" => Some(Verdict::Unsafe),
            _ => None,
        }
    }

    pub fn is_semi_safe(self) -> bool {
        self != Verdict::Unsafe
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A subformula occurrence that discharges the safety condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub subformula: OccurrencePath,
    pub positive: bool,
    pub restriction: Restriction,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OccurrenceEvidence {
    pub path: OccurrencePath,
    pub positive: bool,
    pub strictly_positive: bool,
    /// For strictly positive occurrences: the enclosing `G → H` restricting
    /// the variable in `G`, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub guard: Option<OccurrencePath>,
    /// `None` marks a violation of the safety condition.
    pub witness: Option<Witness>,
}

impl OccurrenceEvidence {
    pub fn semi_safe(&self) -> bool {
        !self.strictly_positive || self.guard.is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VariableEvidence {
    pub quantifier: Quantifier,
    pub occurrences: Vec<OccurrenceEvidence>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SafetyReport {
    pub verdict: Verdict,
    pub per_variable: BTreeMap<String, VariableEvidence>,
    pub warnings: Vec<String>,
}

impl SafetyReport {
    pub fn is_safe(&self) -> bool {
        self.verdict == Verdict::Safe
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Searches the subformulas containing the occurrence, innermost first, for
/// one satisfying condition (a) or (b) for a variable bound by `q`.
fn safety_witness(m: &Formula, x: &str, q: Quantifier, path: &OccurrencePath) -> Option<Witness> {
    let atom = OccurrencePath(path.0[..path.0.len() - 1].to_vec());
    let ancestors: Vec<OccurrencePath> = atom.ancestors().collect();
    for a in ancestors.into_iter().rev() {
        let Ok(crate::formula::Node::Formula(g)) = m.node_at(&a) else {
            continue;
        };
        let positive = polarity(m, &a).map(|p| p.positive).unwrap_or(false);
        let residue = weak_restriction_residue(g, x);
        let restriction = if residue.is_top() {
            Restriction::Positive
        } else if residue.is_bot() {
            Restriction::Negative
        } else {
            continue;
        };
        let ok = match (q, restriction) {
            (Quantifier::Forall, Restriction::Positive) | (Quantifier::Exists, Restriction::Negative) => positive,
            (Quantifier::Forall, Restriction::Negative) | (Quantifier::Exists, Restriction::Positive) => !positive,
        };
        if ok {
            return Some(Witness {
                subformula: a,
                positive,
                restriction,
            });
        }
    }
    None
}

/// Classifies a prenex sentence and records, for every variable occurrence,
/// the guard and witness subformulas that justify it.
pub fn is_safe(s: &PrenexSentence) -> SafetyReport {
    let m = &s.matrix;
    let mut per_variable: BTreeMap<String, VariableEvidence> = s
        .prefix
        .iter()
        .map(|(q, x)| {
            (
                x.clone(),
                VariableEvidence {
                    quantifier: *q,
                    occurrences: Vec::new(),
                },
            )
        })
        .collect();
    for (x, path) in m.var_occurrences() {
        let Some(entry) = per_variable.get_mut(&x) else {
            continue;
        };
        let pol = polarity(m, &path).expect("occurrence path is valid");
        let guard = if pol.strictly_positive {
            semi_safety_guard(m, &x, &path)
        } else {
            None
        };
        let witness = safety_witness(m, &x, entry.quantifier, &path);
        entry.occurrences.push(OccurrenceEvidence {
            path,
            positive: pol.positive,
            strictly_positive: pol.strictly_positive,
            guard,
            witness,
        });
    }
    let warnings = per_variable
        .iter()
        .filter(|(_, e)| e.occurrences.is_empty())
        .map(|(x, e)| format!("vacuous quantifier {} {x}", e.quantifier))
        .collect();
    let all = || per_variable.values().flat_map(|e| e.occurrences.iter());
    let verdict = if !all().all(OccurrenceEvidence::semi_safe) {
        Verdict::Unsafe
    } else if all().all(|o| o.witness.is_some()) {
        Verdict::Safe
    } else {
        Verdict::SemiSafeOnly
    };
    SafetyReport {
        verdict,
        per_variable,
        warnings,
    }
}
