//! Prenex form and the `⊤`/`⊥` simplification rewrites.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::formula::{Formula, Quantifier};
use crate::syntax::print;

/// `Q₁x₁ ⋯ Qₙxₙ M` with distinct `xᵢ` and quantifier-free `M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrenexSentence {
    pub prefix: Vec<(Quantifier, String)>,
    pub matrix: Formula,
}

impl PrenexSentence {
    pub fn new(prefix: Vec<(Quantifier, String)>, matrix: Formula) -> Result<Self> {
        if !matrix.is_quantifier_free() {
            return Err(Error::Unsupported("matrix contains a quantifier".into()));
        }
        let vars: BTreeSet<&String> = prefix.iter().map(|(_, v)| v).collect();
        if vars.len() != prefix.len() {
            return Err(Error::Unsupported("repeated prefix variable".into()));
        }
        let free: Vec<String> = matrix
            .free_vars()
            .into_iter()
            .filter(|v| !vars.contains(v))
            .collect();
        if !free.is_empty() {
            return Err(Error::FreeVariables(free));
        }
        Ok(PrenexSentence { prefix, matrix })
    }

    pub fn to_formula(&self) -> Formula {
        self.prefix
            .iter()
            .rev()
            .fold(self.matrix.clone(), |acc, (q, x)| Formula::quantified(*q, x.clone(), acc))
    }

    pub fn quantifier_of(&self, var: &str) -> Option<Quantifier> {
        self.prefix.iter().find(|(_, v)| v == var).map(|(q, _)| *q)
    }

    pub fn constants(&self) -> BTreeSet<String> {
        self.matrix.constants()
    }

    pub fn is_quantifier_free(&self) -> bool {
        self.prefix.is_empty()
    }
}

impl fmt::Display for PrenexSentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", print(&self.to_formula()))
    }
}

/// Converts a sentence to prenex form.
///
/// Subformulas are prenexed recursively; the prefixes of the two operands of
/// a binary connective are concatenated left then right, and quantifiers
/// pulled out of an antecedent are dualized. Binders are first made pairwise
/// distinct, so no renaming is needed while pulling.
pub fn to_prenex(f: &Formula) -> Result<PrenexSentence> {
    let f = f.distinct_binders();
    let (prefix, matrix) = pull(&f);
    PrenexSentence::new(prefix, matrix)
}

fn pull(f: &Formula) -> (Vec<(Quantifier, String)>, Formula) {
    match f {
        Formula::Bot | Formula::Pred { .. } | Formula::Eq(..) => (Vec::new(), f.clone()),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            let (mut left, ma) = pull(a);
            let (right, mb) = pull(b);
            let matrix = match f {
                Formula::And(..) => ma.and(mb),
                Formula::Or(..) => ma.or(mb),
                _ => {
                    for (q, _) in &mut left {
                        *q = q.dual();
                    }
                    ma.implies(mb)
                }
            };
            left.extend(right);
            (left, matrix)
        }
        Formula::Forall(x, body) | Formula::Exists(x, body) => {
            let q = if matches!(f, Formula::Forall(..)) {
                Quantifier::Forall
            } else {
                Quantifier::Exists
            };
            let (rest, matrix) = pull(body);
            let mut prefix = vec![(q, x.clone())];
            prefix.extend(rest);
            (prefix, matrix)
        }
    }
}

/// Applies the rewrites
/// `¬⊥ ↦ ⊤, ¬⊤ ↦ ⊥, ⊥∧F ↦ ⊥, F∧⊥ ↦ ⊥, ⊤∧F ↦ F, F∧⊤ ↦ F, ⊥∨F ↦ F,
/// F∨⊥ ↦ F, ⊤∨F ↦ ⊤, F∨⊤ ↦ ⊤, ⊥→F ↦ ⊤, F→⊤ ↦ ⊤, ⊤→F ↦ F`
/// until none applies. Children are normalized first; the result of a rewrite
/// at a node is then already normal, so one bottom-up pass suffices.
pub fn simplify(f: &Formula) -> Formula {
    match f {
        Formula::Bot | Formula::Pred { .. } | Formula::Eq(..) => f.clone(),
        Formula::And(a, b) => {
            let (a, b) = (simplify(a), simplify(b));
            if a.is_bot() || b.is_bot() {
                Formula::Bot
            } else if a.is_top() {
                b
            } else if b.is_top() {
                a
            } else {
                a.and(b)
            }
        }
        Formula::Or(a, b) => {
            let (a, b) = (simplify(a), simplify(b));
            if a.is_top() || b.is_top() {
                Formula::top()
            } else if a.is_bot() {
                b
            } else if b.is_bot() {
                a
            } else {
                a.or(b)
            }
        }
        Formula::Implies(a, b) => {
            let (a, b) = (simplify(a), simplify(b));
            if a.is_bot() || b.is_top() {
                Formula::top()
            } else if a.is_top() {
                b
            } else {
                a.implies(b)
            }
        }
        Formula::Forall(x, body) => Formula::forall(x.clone(), simplify(body)),
        Formula::Exists(x, body) => Formula::exists(x.clone(), simplify(body)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse, parse_formula};

    #[test]
    fn cardinality_rule_prenex_form() {
        let f = parse("not exists X Y (q(X) & q(Y) & X != Y) -> p").unwrap();
        let s = to_prenex(&f).unwrap();
        let expected = parse("exists X Y (not (q(X) & q(Y) & X != Y) -> p)").unwrap();
        assert!(s.to_formula().alpha_eq(&expected), "{s}");
        assert_eq!(
            s.prefix.iter().map(|(q, _)| *q).collect::<Vec<_>>(),
            vec![Quantifier::Exists, Quantifier::Exists]
        );
    }

    #[test]
    fn quantifier_free_has_empty_prefix() {
        let f = parse("p & q").unwrap();
        let s = to_prenex(&f).unwrap();
        assert!(s.prefix.is_empty());
        assert_eq!(s.matrix, f);
    }

    #[test]
    fn conjunction_of_universals() {
        let f = parse("forall X (p(X)) & forall X (q(X))").unwrap();
        let s = to_prenex(&f).unwrap();
        let expected = parse("forall X Y (p(X) & q(Y))").unwrap();
        assert!(s.to_formula().alpha_eq(&expected), "{s}");
    }

    #[test]
    fn already_prenex_is_verbatim() {
        let f = parse("exists X (forall Y ((p(X) -> q(Y)) -> r))").unwrap();
        let s = to_prenex(&f).unwrap();
        assert_eq!(s.to_formula(), f);
    }

    #[test]
    fn universal_in_antecedent_becomes_existential() {
        let f = parse("forall X (p(X)) -> q").unwrap();
        let s = to_prenex(&f).unwrap();
        assert_eq!(s.prefix[0].0, Quantifier::Exists);
    }

    #[test]
    fn simplify_examples() {
        let f = parse_formula("(false & q(Y) & X != Y) -> false").unwrap();
        assert!(simplify(&f).is_top());
        assert_eq!(simplify(&parse("true -> p").unwrap()), parse("p").unwrap());
        assert_eq!(simplify(&parse("p | q").unwrap()), parse("p | q").unwrap());
        assert!(simplify(&parse("not true").unwrap()).is_bot());
        assert!(simplify(&parse("not false").unwrap()).is_top());
        assert!(simplify(&parse("p -> true").unwrap()).is_top());
        assert!(simplify(&parse("true | p").unwrap()).is_top());
        assert_eq!(simplify(&parse("false | p").unwrap()), parse("p").unwrap());
    }

    #[test]
    fn prenex_sentence_validation() {
        let m = parse_formula("p(X)").unwrap();
        assert!(PrenexSentence::new(vec![], m.clone()).is_err());
        assert!(PrenexSentence::new(vec![(Quantifier::Forall, "X".into())], m.clone()).is_ok());
        assert!(PrenexSentence::new(
            vec![(Quantifier::Forall, "X".into()), (Quantifier::Exists, "X".into())],
            m
        )
        .is_err());
    }
}
