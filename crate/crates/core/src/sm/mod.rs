//! The stable model operator and finite-domain model checking.
//!
//! `SM[F]` is `F ∧ ¬∃u((u < p) ∧ F*(u))` where `p` lists the predicate
//! constants of `F`. Over a finite universe the second-order quantifier is
//! decided by enumerating every `u` strictly below `p`.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::formula::{mirror_name, signature_of, Formula, Signature, Term};

pub mod characterize;
pub mod engine;
pub mod interpretation;
pub mod negative;
pub mod reduct;

pub use characterize::{characterize, Characterization, CharacterizationCase};
pub use engine::{Budget, ConstMaps, Structure, Vocabulary};
pub use interpretation::{extend, holds, GroundAtom, Interpretation, PredicateValuation, Relation};
pub use negative::{is_negative, split_negative};
pub use reduct::reduct_stable_models;

/// `F` together with `F*(u)`; `u_p` is written `p'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarFormula {
    pub original: Formula,
    pub starred: Formula,
}

pub fn star(f: &Formula) -> StarFormula {
    StarFormula {
        original: f.clone(),
        starred: starred(f),
    }
}

fn starred(f: &Formula) -> Formula {
    match f {
        Formula::Pred { name, args } => Formula::atom(mirror_name(name), args.clone()),
        Formula::Eq(..) | Formula::Bot => f.clone(),
        Formula::And(a, b) => starred(a).and(starred(b)),
        Formula::Or(a, b) => starred(a).or(starred(b)),
        Formula::Implies(a, b) => starred(a)
            .implies(starred(b))
            .and((**a).clone().implies((**b).clone())),
        Formula::Forall(x, body) => Formula::forall(x.clone(), starred(body)),
        Formula::Exists(x, body) => Formula::exists(x.clone(), starred(body)),
    }
}

fn tuple_vars(arity: usize) -> Vec<Term> {
    (1..=arity).map(|i| Term::Var(format!("X{i}"))).collect()
}

/// `u ≤ p`: `⋀ ∀x(u_i(x) → p_i(x))`.
pub fn leq_formula(predicates: &BTreeMap<String, usize>) -> Formula {
    Formula::conjunction(predicates.iter().map(|(p, &arity)| {
        let xs = tuple_vars(arity);
        let body = Formula::atom(mirror_name(p), xs.clone()).implies(Formula::atom(p.clone(), xs));
        close(body, arity)
    }))
}

/// `u = p`: `⋀ ∀x(u_i(x) ↔ p_i(x))`.
pub fn eq_formula(predicates: &BTreeMap<String, usize>) -> Formula {
    Formula::conjunction(predicates.iter().map(|(p, &arity)| {
        let xs = tuple_vars(arity);
        let body = Formula::atom(mirror_name(p), xs.clone()).iff(Formula::atom(p.clone(), xs));
        close(body, arity)
    }))
}

/// `u < p`: `(u ≤ p) ∧ ¬(u = p)`.
pub fn lt_formula(predicates: &BTreeMap<String, usize>) -> Formula {
    leq_formula(predicates).and(eq_formula(predicates).not())
}

fn close(body: Formula, arity: usize) -> Formula {
    (1..=arity)
        .rev()
        .fold(body, |acc, i| Formula::forall(format!("X{i}"), acc))
}

/// Decides stability of structures over a fixed vocabulary.
#[derive(Clone, Debug)]
pub struct StableChecker {
    formula: engine::Compiled,
    starred: engine::Compiled,
    minimized: Vec<bool>,
    budget: Budget,
}

impl StableChecker {
    /// `vocab` must cover `σ(f)`; only the predicates of `f` are minimized.
    pub fn new(f: &Formula, vocab: &Vocabulary, budget: Budget) -> Result<Self> {
        let sig = signature_of(f)?;
        Ok(StableChecker {
            formula: vocab.compile(f)?,
            starred: vocab.compile(&star(f).starred)?,
            minimized: engine::predicate_mask(vocab, &sig.predicates),
            budget,
        })
    }

    pub fn holds(&self, s: &Structure) -> bool {
        self.formula.eval(s, None)
    }

    /// A valuation `u < p` satisfying `F*(u)`, if one exists. The first one in
    /// enumeration order is returned.
    pub fn smaller_witness(&self, s: &Structure) -> Result<Option<Vec<u64>>> {
        let positions: Vec<(usize, u32)> = s
            .relations
            .iter()
            .enumerate()
            .filter(|(p, _)| self.minimized[*p])
            .flat_map(|(p, &bits)| (0..64u32).filter(move |b| bits >> b & 1 == 1).map(move |b| (p, b)))
            .collect();
        let count = 1u128 << positions.len().min(127);
        self.budget.check("sub-valuations u < p", count)?;
        let mut base = s.relations.clone();
        for (p, bits) in base.iter_mut().enumerate() {
            if self.minimized[p] {
                *bits = 0;
            }
        }
        let total = count as u64;
        for k in 0..total - 1 {
            let mut u = base.clone();
            for (j, &(p, b)) in positions.iter().enumerate() {
                if k >> j & 1 == 1 {
                    u[p] |= 1 << b;
                }
            }
            if self.starred.eval(s, Some(&u)) {
                return Ok(Some(u));
            }
        }
        Ok(None)
    }

    pub fn is_stable(&self, s: &Structure) -> Result<bool> {
        Ok(self.holds(s) && self.smaller_witness(s)?.is_none())
    }
}

/// Whether `i` is a stable model of `f`, using the default budget.
pub fn is_stable(f: &Formula, i: &Interpretation) -> Result<bool> {
    is_stable_with(f, i, Budget::default())
}

pub fn is_stable_with(f: &Formula, i: &Interpretation, budget: Budget) -> Result<bool> {
    i.validate()?;
    let sig = i.signature();
    let own = signature_of(f)?;
    for c in &own.constants {
        if !sig.constants.contains(c) {
            return Err(Error::UncoveredSymbol(c.clone()));
        }
    }
    for p in own.predicates.keys() {
        if !sig.predicates.contains_key(p) {
            return Err(Error::UncoveredSymbol(p.clone()));
        }
    }
    let vocab = Vocabulary::new(&sig);
    let s = vocab.from_interpretation(i)?;
    StableChecker::new(f, &vocab, budget)?.is_stable(&s)
}

/// Which interpretations [`stable_models`] ranges over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scope {
    /// Universe `c(F) ∪ extra_constants`, each constant denoting itself.
    Herbrand { extra_constants: BTreeSet<String> },
    /// Universes `{e1, …, en}` with the given constant maps.
    Universe {
        size: usize,
        const_maps: ConstMaps,
        extra_constants: BTreeSet<String>,
        /// Keep one representative per isomorphism class.
        dedupe: bool,
    },
}

impl Scope {
    pub fn herbrand() -> Self {
        Scope::Herbrand {
            extra_constants: BTreeSet::new(),
        }
    }

    pub fn universe(size: usize) -> Self {
        Scope::Universe {
            size,
            const_maps: ConstMaps::All,
            extra_constants: BTreeSet::new(),
            dedupe: false,
        }
    }

    fn extra_constants(&self) -> &BTreeSet<String> {
        match self {
            Scope::Herbrand { extra_constants } | Scope::Universe { extra_constants, .. } => extra_constants,
        }
    }
}

/// Stable models of `f` within `scope`, sorted by their JSON rendering.
pub fn stable_models(f: &Formula, scope: &Scope, budget: Budget) -> Result<Vec<Interpretation>> {
    let sig: Signature = signature_of(f)?.with_constants(scope.extra_constants().iter().cloned());
    let vocab = Vocabulary::new(&sig);
    let checker = StableChecker::new(f, &vocab, budget)?;
    let (size, maps, names, dedupe) = match scope {
        Scope::Herbrand { .. } => {
            if vocab.constants.is_empty() {
                return Err(Error::EmptyHerbrandUniverse);
            }
            (vocab.constants.len(), ConstMaps::Distinct, vocab.constants.clone(), false)
        }
        Scope::Universe {
            size,
            const_maps,
            dedupe,
            ..
        } => (*size, *const_maps, Vocabulary::element_names(*size), *dedupe),
    };
    let count = vocab.structure_count(size, maps, &budget)? as u64;
    let found: Vec<Structure> = (0..count)
        .into_par_iter()
        .map(|index| {
            let s = vocab.structure_at(size, maps, index as u128);
            Ok(checker.is_stable(&s)?.then_some(s))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let found: Vec<Structure> = if dedupe {
        let classes: BTreeSet<Structure> = found.iter().map(|s| engine::canonical_form(&vocab, s)).collect();
        classes.into_iter().collect()
    } else {
        found
    };
    let mut models: Vec<(String, Interpretation)> = found
        .iter()
        .map(|s| {
            let i = vocab.to_interpretation(s, &names);
            (i.to_json(), i)
        })
        .collect();
    models.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(models.into_iter().map(|(_, i)| i).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    #[test]
    fn star_of_worked_example() {
        let f = parse("p(a) & forall X (p(X) -> q(X))").unwrap();
        let expected =
            parse("p'(a) & forall X ((p'(X) -> q'(X)) & (p(X) -> q(X)))".replace('\'', "_m").as_str())
                .unwrap();
        // the parser has no syntax for mirrors; compare after renaming
        let renamed = star(&f).starred.map_bottom_up(&mut |g| match g {
            Formula::Pred { name, args } => Formula::atom(name.replace('\'', "_m"), args),
            other => other,
        });
        assert!(renamed.alpha_eq(&expected), "{renamed:?}");
    }

    #[test]
    fn star_leaves_equality_and_bot() {
        let eq = Formula::eq(Term::var("X"), Term::constant("a"));
        assert_eq!(star(&eq).starred, eq);
        assert_eq!(star(&Formula::Bot).starred, Formula::Bot);
    }

    fn herbrand(text: &str, extra: &[&str]) -> Vec<BTreeSet<GroundAtom>> {
        let scope = Scope::Herbrand {
            extra_constants: extra.iter().map(|s| s.to_string()).collect(),
        };
        stable_models(&parse(text).unwrap(), &scope, Budget::default())
            .unwrap()
            .iter()
            .map(Interpretation::atoms)
            .collect()
    }

    fn atoms(list: &[(&str, &[&str])]) -> BTreeSet<GroundAtom> {
        list.iter()
            .map(|(p, args)| GroundAtom {
                predicate: p.to_string(),
                args: args.iter().map(|a| a.to_string()).collect(),
            })
            .collect()
    }

    #[test]
    fn worked_example_has_one_herbrand_stable_model() {
        let models = herbrand("p(a) & forall X (p(X) -> q(X))", &[]);
        assert_eq!(models, vec![atoms(&[("p", &["a"]), ("q", &["a"])])]);
    }

    #[test]
    fn classically_equivalent_rules_differ() {
        let first = herbrand("forall X (not q(X) -> p(X))", &["a"]);
        let second = herbrand("forall X (not p(X) -> q(X))", &["a"]);
        assert_eq!(first, vec![atoms(&[("p", &["a"])])]);
        assert_eq!(second, vec![atoms(&[("q", &["a"])])]);
    }

    #[test]
    fn rule_with_negation_makes_p_total_and_q_empty() {
        let f = parse("forall X (not q(X) -> p(X))").unwrap();
        for size in 1..=3 {
            let models = stable_models(&f, &Scope::universe(size), Budget::default()).unwrap();
            assert_eq!(models.len(), 1);
            let m = &models[0];
            assert_eq!(m.predicates["p"].tuples.len(), size);
            assert!(m.predicates["q"].tuples.is_empty());
        }
    }

    #[test]
    fn bot_has_no_stable_models() {
        assert!(herbrand("false", &["a"]).is_empty());
        let models = stable_models(&Formula::Bot, &Scope::universe(2), Budget::default()).unwrap();
        assert!(models.is_empty());
    }

    #[test]
    fn empty_herbrand_universe_is_an_error() {
        assert_eq!(
            stable_models(&parse("p").unwrap(), &Scope::herbrand(), Budget::default()),
            Err(Error::EmptyHerbrandUniverse)
        );
    }

    #[test]
    fn is_stable_on_worked_example() {
        let f = parse("p(a) & forall X (p(X) -> q(X))").unwrap();
        let constants = BTreeSet::from(["a".to_string()]);
        let preds = BTreeMap::from([("p".to_string(), 1), ("q".to_string(), 1)]);
        let all = [
            atoms(&[]),
            atoms(&[("p", &["a"])]),
            atoms(&[("q", &["a"])]),
            atoms(&[("p", &["a"]), ("q", &["a"])]),
        ];
        for a in all {
            let i = Interpretation::herbrand(&constants, &preds, &a).unwrap();
            assert_eq!(is_stable(&f, &i).unwrap(), a.len() == 2, "{a:?}");
        }
    }

    #[test]
    fn budget_exceeded_is_reported() {
        let f = parse("forall X Y (p(X, Y) | not p(X, Y))").unwrap();
        let err = stable_models(&f, &Scope::universe(3), Budget::new(100)).unwrap_err();
        assert!(matches!(err, Error::Budget { .. }));
    }

    #[test]
    fn dedupe_keeps_one_model_per_class() {
        let f = parse("exists X (p(X))").unwrap();
        let scope = Scope::Universe {
            size: 3,
            const_maps: ConstMaps::All,
            extra_constants: BTreeSet::new(),
            dedupe: true,
        };
        let models = stable_models(&f, &scope, Budget::default()).unwrap();
        assert_eq!(models.len(), 1);
        assert_eq!(models[0].predicates["p"].tuples.len(), 1);
        let all = stable_models(&f, &Scope::universe(3), Budget::default()).unwrap();
        assert_eq!(all.len(), 3);
    }
}
