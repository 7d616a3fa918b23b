use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use smsafe::safety::{weakly_restricted, Restriction};
use smsafe::sm::{holds, ConstMaps, Vocabulary};
use smsafe::{
    is_safe, parse, print, signature_of, simplify, to_prenex, Budget, Formula, Quantifier, Signature, Term, Verdict,
};

fn term() -> impl Strategy<Value = Term> {
    prop_oneof![
        Just(Term::var("X")),
        Just(Term::var("Y")),
        Just(Term::constant("a")),
        Just(Term::constant("b")),
    ]
}

fn atom() -> BoxedStrategy<Formula> {
    prop_oneof![
        Just(Formula::Bot),
        Just(Formula::prop("r")),
        term().prop_map(|t| Formula::atom("p", vec![t])),
        (term(), term()).prop_map(|(s, t)| Formula::atom("q", vec![s, t])),
        (term(), term()).prop_map(|(s, t)| Formula::eq(s, t)),
    ]
    .boxed()
}

fn quantifier_free() -> BoxedStrategy<Formula> {
    atom()
        .prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a.and(b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a.or(b)),
                (inner.clone(), inner).prop_map(|(a, b)| a.implies(b)),
            ]
        })
        .boxed()
}

/// Sentences with quantifiers anywhere; free variables are closed universally.
fn sentence() -> BoxedStrategy<Formula> {
    atom()
        .prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a.and(b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a.or(b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a.implies(b)),
                (prop::bool::ANY, prop::bool::ANY, inner).prop_map(|(forall, x, body)| {
                    let q = if forall { Quantifier::Forall } else { Quantifier::Exists };
                    Formula::quantified(q, if x { "X" } else { "Y" }, body)
                }),
            ]
        })
        .prop_map(|f| f.universal_closure())
        .boxed()
}

fn signature() -> Signature {
    signature_of(&parse("r & p(a) & q(b, b)").unwrap()).unwrap()
}

/// Checks that `f` and `g` agree on every structure of the given sizes.
fn equivalent(f: &Formula, g: &Formula, sizes: std::ops::RangeInclusive<usize>) -> bool {
    let vocab = Vocabulary::new(&signature());
    let (cf, cg) = (vocab.compile(f).unwrap(), vocab.compile(g).unwrap());
    sizes.into_iter().all(|size| {
        vocab
            .structures(size, ConstMaps::All, &Budget::default())
            .unwrap()
            .all(|s| cf.eval(&s, None) == cg.eval(&s, None))
    })
}

/// One rewrite step at a random redex, or `None` when the formula is normal.
fn rewrite_once(f: &Formula, rng: &mut ChaCha8Rng) -> Option<Formula> {
    fn redex(f: &Formula) -> Option<Formula> {
        let (a, b) = match f {
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => (a, b),
            _ => return None,
        };
        match f {
            Formula::And(..) if a.is_bot() || b.is_bot() => Some(Formula::Bot),
            Formula::And(..) if a.is_top() => Some((**b).clone()),
            Formula::And(..) if b.is_top() => Some((**a).clone()),
            Formula::Or(..) if a.is_top() || b.is_top() => Some(Formula::top()),
            Formula::Or(..) if a.is_bot() => Some((**b).clone()),
            Formula::Or(..) if b.is_bot() => Some((**a).clone()),
            // ¬⊥ is ⊤ already; only rewrite ⊥ → F for F other than ⊥
            Formula::Implies(..) if a.is_bot() && !b.is_bot() => Some(Formula::top()),
            Formula::Implies(..) if b.is_top() && !a.is_bot() => Some(Formula::top()),
            Formula::Implies(..) if a.is_top() => Some((**b).clone()),
            _ => None,
        }
    }
    fn positions(f: &Formula, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if redex(f).is_some() {
            out.push(path.clone());
        }
        if let Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) = f {
            for (i, child) in [a, b].into_iter().enumerate() {
                path.push(i);
                positions(child, path, out);
                path.pop();
            }
        }
    }
    fn replace(f: &Formula, path: &[usize]) -> Formula {
        let Some((&step, rest)) = path.split_first() else {
            return redex(f).unwrap();
        };
        let rebuild = |a: &Formula, b: &Formula| -> (Formula, Formula) {
            if step == 0 {
                (replace(a, rest), b.clone())
            } else {
                (a.clone(), replace(b, rest))
            }
        };
        match f {
            Formula::And(a, b) => {
                let (a, b) = rebuild(a, b);
                a.and(b)
            }
            Formula::Or(a, b) => {
                let (a, b) = rebuild(a, b);
                a.or(b)
            }
            Formula::Implies(a, b) => {
                let (a, b) = rebuild(a, b);
                a.implies(b)
            }
            _ => unreachable!(),
        }
    }
    let mut out = Vec::new();
    positions(f, &mut Vec::new(), &mut out);
    if out.is_empty() {
        return None;
    }
    let path = &out[rng.gen_range(0..out.len())];
    Some(replace(f, path))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn print_parse_round_trip(f in sentence()) {
        let text = print(&f);
        let back = parse(&text).unwrap();
        prop_assert!(back.alpha_eq(&f), "{text}");
        prop_assert_eq!(print(&back), text);
    }

    #[test]
    fn simplify_is_idempotent_and_sound(f in quantifier_free()) {
        let g = simplify(&f);
        prop_assert_eq!(simplify(&g), g.clone());
        prop_assert!(g.is_top() || g.is_bot() || g.size() <= f.size());
        prop_assert!(equivalent(&f.universal_closure(), &g.universal_closure(), 1..=2));
    }

    #[test]
    fn simplify_is_confluent(f in quantifier_free(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut g = f.clone();
        while let Some(next) = rewrite_once(&g, &mut rng) {
            g = next;
        }
        prop_assert_eq!(g, simplify(&f));
    }

    #[test]
    fn prenex_form_is_equivalent(f in sentence()) {
        let s = to_prenex(&f).unwrap();
        prop_assert!(s.matrix.is_quantifier_free());
        prop_assert!(equivalent(&f, &s.to_formula(), 1..=2));
    }

    #[test]
    fn compiled_evaluation_matches_reference(f in sentence(), pick in any::<u64>()) {
        let vocab = Vocabulary::new(&signature());
        let compiled = vocab.compile(&f).unwrap();
        for size in 1..=2 {
            let count = vocab.structure_count(size, ConstMaps::All, &Budget::default()).unwrap();
            for k in 0..8u64 {
                let index = (pick.wrapping_mul(k + 1) as u128) % count;
                let s = vocab.structure_at(size, ConstMaps::All, index);
                let i = vocab.to_interpretation(&s, &Vocabulary::element_names(size));
                prop_assert_eq!(compiled.eval(&s, None), holds(&f, &i, None).unwrap());
            }
        }
    }

    #[test]
    fn weak_restriction_modes_exclude_each_other(f in quantifier_free(), x in prop::bool::ANY) {
        let x = if x { "X" } else { "Y" };
        prop_assert!(
            !(weakly_restricted(&f, x, Restriction::Positive) && weakly_restricted(&f, x, Restriction::Negative))
        );
    }

    #[test]
    fn traditional_rules_are_classified_by_their_positive_body(
        head in prop::option::of(prop::collection::vec(0..3usize, 0..3)),
        positive in prop::collection::vec(prop::collection::vec(0..3usize, 1..3), 0..3),
        negative in prop::collection::vec(prop::collection::vec(0..3usize, 1..3), 0..3),
    ) {
        let vars = ["X", "Y", "Z"];
        let lit = |name: String, args: &[usize]| {
            Formula::atom(name, args.iter().map(|&i| Term::var(vars[i])).collect())
        };
        let body = Formula::conjunction(
            positive.iter().enumerate().map(|(i, args)| lit(format!("b{i}"), args))
                .chain(negative.iter().enumerate().map(|(i, args)| lit(format!("n{i}"), args).not())),
        );
        let head_formula = match &head {
            Some(args) => lit("h".into(), args),
            None => Formula::Bot,
        };
        let rule = body.implies(head_formula).universal_closure();
        let bound: BTreeSet<usize> = positive.iter().flatten().copied().collect();
        let in_head: BTreeSet<usize> = head.iter().flatten().copied().collect();
        let all: BTreeSet<usize> = in_head.iter().chain(negative.iter().flatten()).copied().chain(bound.clone()).collect();
        let expected = if all.is_subset(&bound) {
            Verdict::Safe
        } else if !in_head.is_subset(&bound) {
            Verdict::Unsafe
        } else {
            Verdict::SemiSafeOnly
        };
        let found = is_safe(&to_prenex(&rule).unwrap()).verdict;
        prop_assert_eq!(found, expected, "{}", print(&rule));
    }
}

#[test]
fn corpus_prenex_forms_are_equivalent_up_to_three_elements() {
    let corpus = smsafe::harness::Corpus::shipped();
    for entry in &corpus.entries {
        let f = &entry.formula;
        let vocab = Vocabulary::new(&signature_of(f).unwrap());
        let (cf, cp) = (vocab.compile(f).unwrap(), vocab.compile(&entry.prenex.to_formula()).unwrap());
        for size in 1..=3 {
            let Ok(structures) = vocab.structures(size, ConstMaps::All, &Budget::default()) else {
                continue;
            };
            for s in structures {
                assert_eq!(cf.eval(&s, None), cp.eval(&s, None), "{}", entry.name);
            }
        }
    }
}
