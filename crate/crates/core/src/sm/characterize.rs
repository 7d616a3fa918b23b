//! A variable-free `G` with `SM[F] ≡ G ∧ SPP_{c(F)}` for safe `F`.
//!
//! Under `SPP_c` every `u < p` is one of finitely many valuations
//! `u_i = λx ⋁_{c ∈ C_i} x = c` with `C_i ⊆ c^{m_i}`, so `∃u` becomes a finite
//! disjunction over families `C = (C_1, …, C_n)`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::formula::{mirror_name, signature_of, substitute_pred_exprs, Formula, PredicateExpression, Term};
use crate::grounder::{ground, spp_formula, ConstantSet, GroundOptions};
use crate::prenex::PrenexSentence;
use crate::safety::{is_safe, Verdict};
use crate::sm::engine::Budget;
use crate::sm::star;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum CharacterizationCase {
    /// No object constants: atoms of positive arity are `⊥` under `SPP_∅`.
    NoConstants,
    /// Variable-free input.
    VariableFree,
    /// Grounded over `c(F)`, then handled as a variable-free formula.
    Grounded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Characterization {
    pub g: Formula,
    pub spp: Formula,
    pub case: CharacterizationCase,
}

impl Characterization {
    /// `G ∧ SPP_{c(F)}`.
    pub fn formula(&self) -> Formula {
        self.g.clone().and(self.spp.clone())
    }
}

pub fn characterize(s: &PrenexSentence) -> Result<Characterization> {
    characterize_with(s, Budget::default())
}

pub fn characterize_with(s: &PrenexSentence, budget: Budget) -> Result<Characterization> {
    let report = is_safe(s);
    if report.verdict != Verdict::Safe {
        return Err(Error::Verdict {
            found: report.verdict.to_string(),
            required: Verdict::Safe.to_string(),
        });
    }
    let f = s.to_formula();
    let sig = signature_of(&f)?;
    let c = ConstantSet::from(sig.constants.clone());
    let spp = spp_formula(&sig, &c);
    let (g, case) = if c.is_empty() {
        let mut equality = false;
        f.visit(&mut |h| equality |= matches!(h, Formula::Eq(..)));
        if equality {
            return Err(Error::Unsupported(
                "equality between variables in a sentence without object constants".into(),
            ));
        }
        let reduced = drop_vacuous(&erase_positive_arity(&f));
        (variable_free_sm(&reduced, &c, budget)?, CharacterizationCase::NoConstants)
    } else if s.prefix.is_empty() {
        (variable_free_sm(&s.matrix, &c, budget)?, CharacterizationCase::VariableFree)
    } else {
        let grounded = ground(s, &c, GroundOptions::default())?;
        (variable_free_sm(&grounded, &c, budget)?, CharacterizationCase::Grounded)
    };
    Ok(Characterization { g, spp, case })
}

fn erase_positive_arity(f: &Formula) -> Formula {
    f.map_bottom_up(&mut |g| match g {
        Formula::Pred { ref args, .. } if !args.is_empty() => Formula::Bot,
        other => other,
    })
}

/// Removes quantifiers whose variable no longer occurs; the universe is
/// nonempty, so `∀x G` and `∃x G` are then equivalent to `G`.
fn drop_vacuous(f: &Formula) -> Formula {
    f.map_bottom_up(&mut |g| match g {
        Formula::Forall(_, body) | Formula::Exists(_, body) => *body,
        other => other,
    })
}

fn tuple_eq(d: &[String], c: &[String]) -> Formula {
    Formula::conjunction(
        d.iter()
            .zip(c)
            .map(|(x, y)| Formula::eq(Term::Const(x.clone()), Term::Const(y.clone()))),
    )
}

/// `F ∧ ¬⋁_C ((u ≤ p) ∧ ¬(u = p) ∧ F*(u))` with `u = u_C`, all under `SPP_c`,
/// for a variable-free `f` whose constants lie in `c`.
fn variable_free_sm(f: &Formula, c: &ConstantSet, budget: Budget) -> Result<Formula> {
    let sig = signature_of(f)?;
    let predicates: Vec<(String, usize, Vec<Vec<String>>)> = sig
        .predicates
        .iter()
        .map(|(p, &m)| (p.clone(), m, c.tuples(m)))
        .collect();
    let bits: usize = predicates.iter().map(|(_, _, t)| t.len()).sum();
    if bits >= 64 {
        return Err(Error::Budget {
            what: "families of constant tuples".into(),
            needed: 1u128 << bits.min(127),
            limit: budget.max_candidates,
        });
    }
    budget.check("families of constant tuples", 1u128 << bits)?;
    let starred = star(f).starred;
    let mut disjuncts = Vec::new();
    for family in 0u64..1 << bits {
        let mut offset = 0;
        let mut exprs = BTreeMap::new();
        let mut below = Vec::new();
        let mut equal = Vec::new();
        for (p, m, tuples) in &predicates {
            let chosen: BTreeSet<usize> = (0..tuples.len()).filter(|j| family >> (offset + j) & 1 == 1).collect();
            offset += tuples.len();
            let params: Vec<String> = (1..=*m).map(|i| format!("X{i}")).collect();
            let body = Formula::disjunction(chosen.iter().map(|&j| {
                Formula::conjunction(
                    params
                        .iter()
                        .zip(&tuples[j])
                        .map(|(x, k)| Formula::eq(Term::Var(x.clone()), Term::Const(k.clone()))),
                )
            }));
            exprs.insert(mirror_name(p), PredicateExpression::new(params, body));
            let atom = |t: &[String]| Formula::atom(p.clone(), t.iter().cloned().map(Term::Const).collect());
            below.extend(chosen.iter().map(|&j| atom(&tuples[j])));
            equal.extend(tuples.iter().map(|d| {
                atom(d).implies(Formula::disjunction(chosen.iter().map(|&j| tuple_eq(d, &tuples[j]))))
            }));
        }
        let instance = substitute_pred_exprs(&starred, &exprs)?;
        disjuncts.push(
            Formula::conjunction(below)
                .and(Formula::conjunction(equal).not())
                .and(instance),
        );
    }
    Ok(f.clone().and(Formula::disjunction(disjuncts).not()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prenex::to_prenex;
    use crate::sm::engine::{ConstMaps, Vocabulary};
    use crate::sm::StableChecker;
    use crate::syntax::parse;

    fn check_equivalence(text: &str, max_size: usize) -> CharacterizationCase {
        let f = parse(text).unwrap();
        let ch = characterize(&to_prenex(&f).unwrap()).unwrap();
        assert!(ch.g.is_variable_free(), "{text}");
        let vocab = Vocabulary::new(&signature_of(&f).unwrap());
        let checker = StableChecker::new(&f, &vocab, Budget::default()).unwrap();
        let target = vocab.compile(&ch.formula()).unwrap();
        for size in 1..=max_size {
            for s in vocab.structures(size, ConstMaps::All, &Budget::default()).unwrap() {
                assert_eq!(checker.is_stable(&s).unwrap(), target.eval(&s, None), "{text} {s:?}");
            }
        }
        ch.case
    }

    #[test]
    fn worked_example_is_grounded() {
        assert_eq!(check_equivalence("p(a) & forall X (p(X) -> q(X))", 3), CharacterizationCase::Grounded);
    }

    #[test]
    fn propositional_input() {
        assert_eq!(check_equivalence("p & not q", 2), CharacterizationCase::NoConstants);
        assert_eq!(check_equivalence("p | not p", 2), CharacterizationCase::NoConstants);
    }

    #[test]
    fn variable_free_with_constants() {
        assert_eq!(check_equivalence("(not p(a) -> q(b)) & (q(b) -> p(b))", 3), CharacterizationCase::VariableFree);
    }

    #[test]
    fn no_constants_with_variables() {
        assert_eq!(
            check_equivalence("forall X (p(X) -> q(X)) & r", 3),
            CharacterizationCase::NoConstants
        );
        assert_eq!(check_equivalence("exists X (not p(X) -> q)", 3), CharacterizationCase::NoConstants);
    }

    #[test]
    fn variable_equality_without_constants_is_unsupported() {
        let s = to_prenex(&parse("exists X Y (not (q(X) & q(Y) & X != Y) -> p)").unwrap()).unwrap();
        assert!(matches!(characterize(&s), Err(Error::Unsupported(_))));
    }

    #[test]
    fn bot_characterization_has_no_models() {
        let ch = characterize(&to_prenex(&Formula::Bot).unwrap()).unwrap();
        assert!(matches!(ch.g, Formula::And(ref a, _) if a.is_bot()));
    }

    #[test]
    fn unsafe_input_is_rejected() {
        let s = to_prenex(&parse("forall X (not q(X) -> p(X))").unwrap()).unwrap();
        assert!(matches!(characterize(&s), Err(Error::Verdict { .. })));
    }
}
