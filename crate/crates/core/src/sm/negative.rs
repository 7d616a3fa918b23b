use crate::formula::Formula;

/// Every occurrence of every predicate constant lies in the antecedent of
/// some implication.
pub fn is_negative(f: &Formula) -> bool {
    fn go(f: &Formula, in_antecedent: bool) -> bool {
        match f {
            Formula::Bot | Formula::Eq(..) => true,
            Formula::Pred { .. } => in_antecedent,
            Formula::And(a, b) | Formula::Or(a, b) => go(a, in_antecedent) && go(b, in_antecedent),
            Formula::Implies(a, b) => go(a, true) && go(b, in_antecedent),
            Formula::Forall(_, body) | Formula::Exists(_, body) => go(body, in_antecedent),
        }
    }
    go(f, false)
}

/// Splits the top-level conjuncts of `f` into the non-negative core and the
/// negative part. Either side is `⊤` when it has no conjuncts.
pub fn split_negative(f: &Formula) -> (Formula, Formula) {
    let (negative, core): (Vec<&Formula>, Vec<&Formula>) =
        f.conjuncts().into_iter().partition(|g| is_negative(g));
    (
        Formula::conjunction(core.into_iter().cloned()),
        Formula::conjunction(negative.into_iter().cloned()),
    )
}
