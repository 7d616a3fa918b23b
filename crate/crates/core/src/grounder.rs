//! `in_c`, `SPP_c`, the expressions `e_c`, and `Ground_c`.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::formula::{Formula, PredicateExpression, Quantifier, Signature, Term};
use crate::prenex::{simplify, PrenexSentence};

/// A finite set of object constants, iterated in lexicographic order. That
/// order fixes the operand order of every conjunction and disjunction built
/// here.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConstantSet(BTreeSet<String>);

impl ConstantSet {
    pub fn new<I, S>(constants: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        ConstantSet(constants.into_iter().map(Into::into).collect())
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &String> {
        self.0.iter()
    }

    pub fn contains(&self, c: &str) -> bool {
        self.0.contains(c)
    }

    pub fn as_set(&self) -> &BTreeSet<String> {
        &self.0
    }

    pub fn with(&self, extra: &str) -> Self {
        let mut out = self.clone();
        out.0.insert(extra.to_owned());
        out
    }

    /// All tuples of the given length over the set, lexicographically.
    pub fn tuples(&self, arity: usize) -> Vec<Vec<String>> {
        (0..arity).fold(vec![Vec::new()], |acc, _| {
            acc.into_iter()
                .flat_map(|prefix| {
                    self.0.iter().map(move |c| {
                        let mut t = prefix.clone();
                        t.push(c.clone());
                        t
                    })
                })
                .collect()
        })
    }
}

impl From<BTreeSet<String>> for ConstantSet {
    fn from(set: BTreeSet<String>) -> Self {
        ConstantSet(set)
    }
}

/// `in_c(x₁…xₘ) = ⋀ⱼ ⋁_{c∈c} xⱼ = c`. Empty `vars` gives `⊤`; otherwise an
/// empty `c` gives `⊥`.
pub fn in_formula(vars: &[Term], c: &ConstantSet) -> Formula {
    if c.is_empty() && !vars.is_empty() {
        return Formula::Bot;
    }
    Formula::conjunction(vars.iter().map(|x| {
        Formula::disjunction(c.iter().map(|k| Formula::eq(x.clone(), Term::Const(k.clone()))))
    }))
}

fn params(arity: usize) -> Vec<String> {
    (1..=arity).map(|i| format!("X{i}")).collect()
}

/// `SPP_c`: `⋀ ∀x(p(x) → in_c(x))` over the predicates of positive arity.
pub fn spp_formula(sig: &Signature, c: &ConstantSet) -> Formula {
    Formula::conjunction(sig.predicates.iter().filter(|(_, &a)| a > 0).map(|(p, &arity)| {
        let xs = params(arity);
        let terms: Vec<Term> = xs.iter().cloned().map(Term::Var).collect();
        let body = Formula::atom(p.clone(), terms.clone()).implies(in_formula(&terms, c));
        xs.into_iter().rev().fold(body, |acc, x| Formula::forall(x, acc))
    }))
}

/// `e_c`: `λx(p(x) ∧ in_c(x))` for each predicate; nullary ones map to `λ().p`.
pub fn e_c_expressions(sig: &Signature, c: &ConstantSet) -> BTreeMap<String, PredicateExpression> {
    sig.predicates
        .iter()
        .map(|(p, &arity)| {
            let xs = params(arity);
            let terms: Vec<Term> = xs.iter().cloned().map(Term::Var).collect();
            let atom = Formula::atom(p.clone(), terms.clone());
            let body = if arity == 0 {
                atom
            } else {
                atom.and(in_formula(&terms, c))
            };
            (p.clone(), PredicateExpression::new(xs, body))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GroundOptions {
    /// Permit a constant set that misses some constant of the sentence.
    pub allow_missing_constants: bool,
    /// Run [`simplify`] on the result.
    pub simplify: bool,
}

/// `Ground_c[F]`: each `∀x` becomes a conjunction and each `∃x` a disjunction
/// over `c`.
pub fn ground(s: &PrenexSentence, c: &ConstantSet, options: GroundOptions) -> Result<Formula> {
    if c.is_empty() {
        return Err(Error::EmptyConstantSet);
    }
    let missing: Vec<String> = s
        .constants()
        .into_iter()
        .filter(|k| !c.contains(k))
        .collect();
    if !missing.is_empty() && !options.allow_missing_constants {
        return Err(Error::MissingConstants(missing));
    }
    let g = ground_prefix(&s.prefix, &s.matrix, c);
    Ok(if options.simplify { simplify(&g) } else { g })
}

fn ground_prefix(prefix: &[(Quantifier, String)], matrix: &Formula, c: &ConstantSet) -> Formula {
    let Some(((q, x), rest)) = prefix.split_first() else {
        return matrix.clone();
    };
    let instances = c
        .iter()
        .map(|k| ground_prefix(rest, &matrix.substitute_term(x, &Term::Const(k.clone())), c));
    match q {
        Quantifier::Forall => Formula::conjunction(instances),
        Quantifier::Exists => Formula::disjunction(instances),
    }
}
