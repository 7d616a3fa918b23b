//! Exhaustive finite-model verification of the properties of safe and
//! semi-safe sentences.
//!
//! Every suite enumerates all structures of sizes `1..=max_universe` with all
//! constant maps and reports the number of checked instances, the number of
//! violations and the first violation in enumeration order. Counterexamples
//! carry enough data to be re-checked with the reference evaluator
//! ([`replay`]).

mod corpus;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

pub use corpus::{Corpus, CorpusEntry, SHIPPED};

use crate::error::{Error, Result};
use crate::formula::{mirror_name, signature_of, substitute_pred_exprs, Formula, Signature, Term};
use crate::grounder::{e_c_expressions, ground, in_formula, spp_formula, ConstantSet, GroundOptions};
use crate::prenex::{to_prenex, PrenexSentence};
use crate::safety::{non_semi_safe_vars, restricted_vars, Verdict};
use crate::sm::characterize::characterize_with;
use crate::sm::engine::{decode_tuple, encode_tuple, Budget, ConstMaps, Structure, Vocabulary};
use crate::sm::{extend, holds, is_stable_with, split_negative, star, Interpretation, PredicateValuation, StableChecker};
use crate::syntax::{parse, print};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Prop1,
    Prop2,
    Prop3,
    Prop4,
    Prop5,
    Lemma1,
    Lemma2,
    Lemma3,
    Negsplit,
    Counterexamples,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Prop1,
        Suite::Prop2,
        Suite::Prop3,
        Suite::Prop4,
        Suite::Prop5,
        Suite::Lemma1,
        Suite::Lemma2,
        Suite::Lemma3,
        Suite::Negsplit,
        Suite::Counterexamples,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Prop1 => "prop1",
            Suite::Prop2 => "prop2",
            Suite::Prop3 => "prop3",
            Suite::Prop4 => "prop4",
            Suite::Prop5 => "prop5",
            Suite::Lemma1 => "lemma1",
            Suite::Lemma2 => "lemma2",
            Suite::Lemma3 => "lemma3",
            Suite::Negsplit => "negsplit",
            Suite::Counterexamples => "counterexamples",
        }
    }

    /// What the suite checks, in one line.
    pub fn description(self) -> &'static str {
        match self {
            Suite::Prop1 => "stable models of semi-safe sentences satisfy SPP_c(F)",
            Suite::Prop2 => "SPP_c entails Ground_c[F] <-> F for safe F",
            Suite::Prop3 => "F and Ground_c[F] have the same stable models for safe F",
            Suite::Prop4 => "SM[F] is equivalent to G & SPP_c(F) for the constructed G",
            Suite::Prop5 => "stability of safe F is invariant under extension",
            Suite::Lemma1 => "((u <= p) & F*(u)) -> F is valid",
            Suite::Lemma2 => "F*(e_c) -> in_c(RV(F)) is valid",
            Suite::Lemma3 => "(F & in_c(NS(F))) -> F*(e_c) is valid",
            Suite::Negsplit => "SM[F & G] is equivalent to SM[F] & G for negative G",
            Suite::Counterexamples => "grounding fails for the semi-safe forall X (not not p(X, a))",
        }
    }

    /// Entries a suite accepts, by declared verdict.
    fn accepts(self, verdict: Verdict) -> bool {
        match self {
            Suite::Prop1 => verdict.is_semi_safe(),
            Suite::Prop2 | Suite::Prop3 | Suite::Prop4 | Suite::Prop5 => verdict == Verdict::Safe,
            _ => true,
        }
    }

    fn required(self) -> &'static str {
        match self {
            Suite::Prop1 => "semi-safe",
            _ => "safe",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::UnknownSuite(s.to_owned()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub max_universe: usize,
    /// Entries with more object constants are skipped.
    pub max_constants: Option<usize>,
    pub budget: Budget,
    /// Run on every entry regardless of its verdict.
    pub force: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            max_universe: 3,
            max_constants: None,
            budget: Budget::default(),
            force: false,
        }
    }
}

/// Tuples of element names per predicate.
pub type NamedValuation = BTreeMap<String, Vec<Vec<String>>>;

/// A violation with the data needed to re-check it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Counterexample {
    pub suite: Suite,
    pub entry: String,
    /// The sentence the property is about, in text syntax.
    pub formula: String,
    /// The constant set `c`, when the property depends on one.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub constants: Vec<String>,
    /// The negative conjunct, for the splitting suite.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub negative: Option<String>,
    /// Number of fresh elements, for the extension suite.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extension: Option<usize>,
    pub interpretation: Interpretation,
    /// The valuation `u` involved in the violation, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<NamedValuation>,
    pub detail: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Expectation {
    NoViolations,
    Counterexample,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Skip {
    pub entry: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerificationReport {
    pub suite: Suite,
    pub expectation: Expectation,
    pub entries: usize,
    pub instances: u64,
    pub violations: u64,
    /// Failures of control checks that must not fail even when a violation
    /// is expected.
    pub control_failures: u64,
    pub counterexample: Option<Counterexample>,
    pub skipped: Vec<Skip>,
    pub notes: Vec<String>,
    #[serde(skip)]
    pub runtime: Duration,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        match self.expectation {
            Expectation::NoViolations => self.violations == 0,
            Expectation::Counterexample => self.counterexample.is_some() && self.control_failures == 0,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn summary(&self) -> String {
        let status = if self.passed() { "verified" } else { "FAILED" };
        format!(
            "{}: {status} ({} entries, {} instances, {} violations, {} skipped)",
            self.suite,
            self.entries,
            self.instances,
            self.violations,
            self.skipped.len()
        )
    }
}

/// Runs a suite over the entries of `corpus` that it accepts.
pub fn verify(suite: Suite, corpus: &Corpus, options: &VerifyOptions) -> Result<VerificationReport> {
    let start = Instant::now();
    if suite == Suite::Counterexamples {
        let mut report = counterexample_suite(options)?;
        report.runtime = start.elapsed();
        return Ok(report);
    }
    let selected: Vec<&CorpusEntry> = corpus
        .entries
        .iter()
        .filter(|e| options.force || suite.accepts(e.verdict))
        .collect();
    if selected.is_empty() {
        if let Some(first) = corpus.entries.first() {
            return Err(Error::Verdict {
                found: first.verdict.to_string(),
                required: suite.required().to_owned(),
            });
        }
    }
    let outcomes: Vec<Outcome> = selected
        .par_iter()
        .map(|entry| run_entry(suite, entry, options))
        .collect::<Result<Vec<_>>>()?;
    let mut report = VerificationReport {
        suite,
        expectation: Expectation::NoViolations,
        entries: 0,
        instances: 0,
        violations: 0,
        control_failures: 0,
        counterexample: None,
        skipped: Vec::new(),
        notes: Vec::new(),
        runtime: Duration::ZERO,
    };
    for (entry, outcome) in selected.iter().zip(outcomes) {
        if let Some(reason) = outcome.skipped {
            report.skipped.push(Skip {
                entry: entry.name.clone(),
                reason,
            });
            continue;
        }
        report.entries += 1;
        report.instances += outcome.instances;
        report.violations += outcome.violations;
        if report.counterexample.is_none() {
            report.counterexample = outcome.counterexample;
        }
    }
    report.runtime = start.elapsed();
    Ok(report)
}

#[derive(Default)]
struct Outcome {
    instances: u64,
    violations: u64,
    counterexample: Option<Counterexample>,
    skipped: Option<String>,
}

impl Outcome {
    fn absorb(&mut self, other: Outcome) {
        self.instances += other.instances;
        self.violations += other.violations;
        if self.counterexample.is_none() {
            self.counterexample = other.counterexample;
        }
    }
}

struct Finding {
    witness: Option<Vec<u64>>,
    extension: Option<usize>,
    detail: String,
}

impl Finding {
    fn new(detail: impl Into<String>) -> Self {
        Finding {
            witness: None,
            extension: None,
            detail: detail.into(),
        }
    }
}

/// What a counterexample is about, besides the interpretation.
#[derive(Clone)]
struct Subject {
    suite: Suite,
    entry: String,
    formula: Formula,
    constants: Vec<String>,
    negative: Option<Formula>,
    /// Predicates whose witness relations are reported.
    minimized: BTreeSet<String>,
}

/// Checks every structure of sizes `1..=max_universe` over `vocab`.
fn scan<F>(vocab: &Vocabulary, subject: &Subject, options: &VerifyOptions, check: F) -> Result<Outcome>
where
    F: Fn(&Structure) -> Result<Option<Finding>> + Sync,
{
    let mut outcome = Outcome::default();
    for size in 1..=options.max_universe {
        let count = vocab.structure_count(size, ConstMaps::All, &options.budget)? as u64;
        let found: Vec<(Structure, Finding)> = (0..count)
            .into_par_iter()
            .filter_map(|index| {
                let s = vocab.structure_at(size, ConstMaps::All, index as u128);
                match check(&s) {
                    Ok(None) => None,
                    Ok(Some(finding)) => Some(Ok((s, finding))),
                    Err(e) => Some(Err(e)),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        outcome.instances += count;
        outcome.violations += found.len() as u64;
        if outcome.counterexample.is_none() {
            if let Some((s, finding)) = found.into_iter().next() {
                outcome.counterexample = Some(counterexample(vocab, subject, &s, finding));
            }
        }
    }
    Ok(outcome)
}

fn counterexample(vocab: &Vocabulary, subject: &Subject, s: &Structure, finding: Finding) -> Counterexample {
    let names = Vocabulary::element_names(s.size);
    let witness = finding.witness.map(|bits| {
        vocab
            .valuation_from_bits(s.size, &bits, &subject.minimized)
            .into_iter()
            .map(|(p, tuples)| {
                let named = tuples
                    .into_iter()
                    .map(|t| t.into_iter().map(|e| names[e].clone()).collect())
                    .collect();
                (p, named)
            })
            .collect()
    });
    Counterexample {
        suite: subject.suite,
        entry: subject.entry.clone(),
        formula: print(&subject.formula),
        constants: subject.constants.clone(),
        negative: subject.negative.as_ref().map(print),
        extension: finding.extension,
        interpretation: vocab.to_interpretation(s, &names),
        witness,
        detail: finding.detail,
    }
}

/// The first `n` names from `a, b, …, z, k1, k2, …` that are not in `used`.
fn fresh_constants(used: &BTreeSet<String>, n: usize) -> Vec<String> {
    let letters = ('a'..='z').map(String::from);
    let numbered = (1..).map(|i| format!("k{i}"));
    letters.chain(numbered).filter(|c| !used.contains(c)).take(n).collect()
}

/// `c(F)` and `c(F)` plus one fresh constant; only the latter when `c(F)` is
/// empty.
fn constant_sets(f: &Formula) -> Vec<ConstantSet> {
    let own = f.constants();
    let extra = fresh_constants(&own, 1).remove(0);
    let base = ConstantSet::from(own);
    let widened = base.with(&extra);
    if base.is_empty() {
        vec![widened]
    } else {
        vec![base, widened]
    }
}

fn subject(suite: Suite, entry: &CorpusEntry, formula: &Formula, constants: &ConstantSet) -> Result<Subject> {
    Ok(Subject {
        suite,
        entry: entry.name.clone(),
        formula: formula.clone(),
        constants: constants.iter().cloned().collect(),
        negative: None,
        minimized: signature_of(formula)?.predicates.into_keys().collect(),
    })
}

fn run_entry(suite: Suite, entry: &CorpusEntry, options: &VerifyOptions) -> Result<Outcome> {
    if let Some(max) = options.max_constants {
        let n = entry.formula.constants().len();
        if n > max {
            return Ok(Outcome {
                skipped: Some(format!("{n} object constants exceed the limit of {max}")),
                ..Outcome::default()
            });
        }
    }
    match suite {
        Suite::Prop1 => prop1(entry, options),
        Suite::Prop2 => prop2(entry, options),
        Suite::Prop3 => prop3(entry, options),
        Suite::Prop4 => prop4(entry, options),
        Suite::Prop5 => prop5(entry, options),
        Suite::Lemma1 => lemma1(entry, options),
        Suite::Lemma2 | Suite::Lemma3 => lemma23(suite, entry, options),
        Suite::Negsplit => negsplit(entry, options),
        Suite::Counterexamples => unreachable!("handled by verify"),
    }
}

fn prop1(entry: &CorpusEntry, options: &VerifyOptions) -> Result<Outcome> {
    let f = &entry.formula;
    let sig = signature_of(f)?;
    let c = ConstantSet::from(sig.constants.clone());
    let vocab = Vocabulary::new(&sig);
    let checker = StableChecker::new(f, &vocab, options.budget)?;
    let spp = vocab.compile(&spp_formula(&sig, &c))?;
    let subject = subject(Suite::Prop1, entry, f, &c)?;
    scan(&vocab, &subject, options, |s| {
        Ok((checker.is_stable(s)? && !spp.eval(s, None)).then(|| Finding::new("stable model violates SPP_c(F)")))
    })
}

fn grounding_vocab(f: &Formula, c: &ConstantSet) -> Result<(Signature, Vocabulary)> {
    let sig = signature_of(f)?;
    let vocab = Vocabulary::new(&sig.clone().with_constants(c.iter().cloned()));
    Ok((sig, vocab))
}

fn prop2(entry: &CorpusEntry, options: &VerifyOptions) -> Result<Outcome> {
    let mut total = Outcome::default();
    for c in constant_sets(&entry.formula) {
        total.absorb(grounding_equivalence(Suite::Prop2, entry, &entry.prenex, &c, options)?);
    }
    Ok(total)
}

/// Structures satisfying `SPP_c` in which `Ground_c[F]` and `F` disagree.
fn grounding_equivalence(
    suite: Suite,
    entry: &CorpusEntry,
    s: &PrenexSentence,
    c: &ConstantSet,
    options: &VerifyOptions,
) -> Result<Outcome> {
    let f = s.to_formula();
    let (sig, vocab) = grounding_vocab(&f, c)?;
    let original = vocab.compile(&f)?;
    let grounded = vocab.compile(&ground(s, c, GroundOptions::default())?)?;
    let spp = vocab.compile(&spp_formula(&sig, c))?;
    let subject = subject(suite, entry, &f, c)?;
    scan(&vocab, &subject, options, |st| {
        if !spp.eval(st, None) {
            return Ok(None);
        }
        let (a, b) = (grounded.eval(st, None), original.eval(st, None));
        Ok((a != b).then(|| Finding::new(format!("SPP_c holds, Ground_c[F] is {a}, F is {b}"))))
    })
}

fn prop3(entry: &CorpusEntry, options: &VerifyOptions) -> Result<Outcome> {
    let mut total = Outcome::default();
    for c in constant_sets(&entry.formula) {
        let f = &entry.formula;
        let (_, vocab) = grounding_vocab(f, &c)?;
        let grounded = ground(&entry.prenex, &c, GroundOptions::default())?;
        let original = StableChecker::new(f, &vocab, options.budget)?;
        let ground_checker = StableChecker::new(&grounded, &vocab, options.budget)?;
        let subject = subject(Suite::Prop3, entry, f, &c)?;
        total.absorb(scan(&vocab, &subject, options, |s| {
            let a = original.is_stable(s)?;
            let b = ground_checker.is_stable(s)?;
            if a == b {
                return Ok(None);
            }
            let (loser, name) = if a { (&ground_checker, "Ground_c[F]") } else { (&original, "F") };
            let witness = if loser.holds(s) { loser.smaller_witness(s)? } else { None };
            Ok(Some(Finding {
                witness,
                extension: None,
                detail: format!("stable for F: {a}, stable for Ground_c[F]: {b}; {name} is not stable"),
            }))
        })?);
    }
    Ok(total)
}

fn prop4(entry: &CorpusEntry, options: &VerifyOptions) -> Result<Outcome> {
    let ch = match characterize_with(&entry.prenex, options.budget) {
        Ok(ch) => ch,
        Err(Error::Unsupported(reason)) => {
            return Ok(Outcome {
                skipped: Some(reason),
                ..Outcome::default()
            })
        }
        Err(e) => return Err(e),
    };
    let f = &entry.formula;
    let sig = signature_of(f)?;
    let vocab = Vocabulary::new(&sig);
    let checker = StableChecker::new(f, &vocab, options.budget)?;
    let target = vocab.compile(&ch.formula())?;
    let subject = subject(Suite::Prop4, entry, f, &ConstantSet::from(sig.constants.clone()))?;
    scan(&vocab, &subject, options, |s| {
        let a = checker.is_stable(s)?;
        let b = target.eval(s, None);
        Ok((a != b).then(|| Finding::new(format!("stable: {a}, G & SPP_c(F): {b}"))))
    })
}

/// The extension of `s` by `extra` fresh elements, appended after the
/// existing ones.
pub fn extend_structure(vocab: &Vocabulary, s: &Structure, extra: usize) -> Structure {
    let n = s.size + extra;
    let relations = vocab
        .predicates
        .iter()
        .zip(&s.relations)
        .map(|((_, arity), &bits)| {
            (0..64usize)
                .filter(|b| bits >> b & 1 == 1)
                .fold(0u64, |acc, b| acc | 1 << encode_tuple(&decode_tuple(b, s.size, *arity), n))
        })
        .collect();
    Structure {
        size: n,
        constants: s.constants.clone(),
        relations,
    }
}

fn prop5(entry: &CorpusEntry, options: &VerifyOptions) -> Result<Outcome> {
    let f = &entry.formula;
    let sig = signature_of(f)?;
    let vocab = Vocabulary::new(&sig);
    vocab.tuple_counts(options.max_universe + 2)?;
    let checker = StableChecker::new(f, &vocab, options.budget)?;
    let subject = subject(Suite::Prop5, entry, f, &ConstantSet::default())?;
    let mut outcome = scan(&vocab, &subject, options, |s| {
        let base = checker.is_stable(s)?;
        for extra in 1..=2 {
            let extended = checker.is_stable(&extend_structure(&vocab, s, extra))?;
            if extended != base {
                return Ok(Some(Finding {
                    witness: None,
                    extension: Some(extra),
                    detail: format!("stable: {base}, extension by {extra} elements stable: {extended}"),
                }));
            }
        }
        Ok(None)
    })?;
    outcome.instances *= 2;
    Ok(outcome)
}

/// `M` with each free variable replaced by a fresh object constant. Every
/// assignment of the variables is the denotation of those constants under
/// some constant map.
fn close_with_constants(m: &Formula, avoid: &BTreeSet<String>) -> (Formula, BTreeMap<String, Term>) {
    let vars: Vec<String> = m.free_vars().into_iter().collect();
    let mut used = avoid.clone();
    used.extend(m.constants());
    let names = (1..)
        .map(|i| format!("v{i}"))
        .filter(|n| !used.contains(n))
        .take(vars.len());
    let map: BTreeMap<String, Term> = vars.into_iter().zip(names.map(Term::Const)).collect();
    (m.substitute(&map), map)
}

fn lemma1(entry: &CorpusEntry, options: &VerifyOptions) -> Result<Outcome> {
    let (matrix, _) = close_with_constants(&entry.prenex.matrix, &BTreeSet::new());
    let mut total = Outcome::default();
    for h in [entry.formula.clone(), matrix] {
        let sig = signature_of(&h)?;
        let vocab = Vocabulary::new(&sig);
        let compiled = vocab.compile(&h)?;
        let starred = vocab.compile(&star(&h).starred)?;
        let subject = subject(Suite::Lemma1, entry, &h, &ConstantSet::default())?;
        total.absorb(scan(&vocab, &subject, options, |s| {
            if compiled.eval(s, None) {
                return Ok(None);
            }
            // F is false: no u ≤ p may satisfy F*(u)
            let positions: Vec<(usize, u32)> = s
                .relations
                .iter()
                .enumerate()
                .flat_map(|(p, &bits)| (0..64u32).filter(move |b| bits >> b & 1 == 1).map(move |b| (p, b)))
                .collect();
            options.budget.check("valuations u <= p", 1u128 << positions.len().min(127))?;
            for k in 0u64..1 << positions.len() {
                let mut u = vec![0u64; s.relations.len()];
                for (j, &(p, b)) in positions.iter().enumerate() {
                    if k >> j & 1 == 1 {
                        u[p] |= 1 << b;
                    }
                }
                if starred.eval(s, Some(&u)) {
                    return Ok(Some(Finding {
                        witness: Some(u),
                        extension: None,
                        detail: "u <= p and F*(u) hold but F does not".into(),
                    }));
                }
            }
            Ok(None)
        })?);
    }
    Ok(total)
}

/// The validity formula of the second or third lemma for a quantifier-free
/// `m` and constant set `c ⊇ c(m)`, with free variables replaced by fresh
/// constants.
pub fn lemma_formula(suite: Suite, m: &Formula, c: &ConstantSet) -> Result<Formula> {
    let (closed, map) = close_with_constants(m, c.as_set());
    let sig = signature_of(m)?;
    let exprs = e_c_expressions(&sig, c)
        .into_iter()
        .map(|(p, e)| (mirror_name(&p), e))
        .collect();
    let image = substitute_pred_exprs(&star(&closed).starred, &exprs)?;
    let terms = |vars: BTreeSet<String>| -> Vec<Term> { vars.iter().map(|v| map[v].clone()).collect() };
    Ok(match suite {
        Suite::Lemma2 => image.implies(in_formula(&terms(restricted_vars(m)), c)),
        Suite::Lemma3 => closed
            .and(in_formula(&terms(non_semi_safe_vars(m)), c))
            .implies(image),
        _ => return Err(Error::UnknownSuite(suite.name().to_owned())),
    })
}

fn lemma23(suite: Suite, entry: &CorpusEntry, options: &VerifyOptions) -> Result<Outcome> {
    let m = &entry.prenex.matrix;
    let mut total = Outcome::default();
    for c in constant_sets(m).into_iter().chain(m.constants().is_empty().then(ConstantSet::default)) {
        let lemma = lemma_formula(suite, m, &c)?;
        let sig = signature_of(&lemma)?.with_constants(c.iter().cloned());
        let vocab = Vocabulary::new(&sig);
        let compiled = vocab.compile(&lemma)?;
        let subject = subject(suite, entry, &lemma, &c)?;
        total.absorb(scan(&vocab, &subject, options, |s| {
            Ok((!compiled.eval(s, None)).then(|| Finding::new("the implication is false")))
        })?);
    }
    Ok(total)
}

fn negsplit(entry: &CorpusEntry, options: &VerifyOptions) -> Result<Outcome> {
    let f = &entry.formula;
    let sig = signature_of(f)?;
    let mut pairs = Vec::new();
    let spp = spp_formula(&sig, &ConstantSet::from(sig.constants.clone()));
    if !spp.is_top() {
        pairs.push((f.clone(), spp));
    }
    let (core, negative) = split_negative(f);
    if !negative.is_top() && !core.is_top() {
        pairs.push((core, negative));
    }
    let mut total = Outcome::default();
    for (core, negative) in pairs {
        let whole = core.clone().and(negative.clone());
        let vocab = Vocabulary::new(&signature_of(&whole)?);
        let joint = StableChecker::new(&whole, &vocab, options.budget)?;
        let alone = StableChecker::new(&intensional_over(&core, &negative)?, &vocab, options.budget)?;
        let g = vocab.compile(&negative)?;
        let mut subject = subject(Suite::Negsplit, entry, &core, &ConstantSet::default())?;
        subject.negative = Some(negative.clone());
        total.absorb(scan(&vocab, &subject, options, |s| {
            let a = joint.is_stable(s)?;
            let b = alone.is_stable(s)? && g.eval(s, None);
            Ok((a != b).then(|| Finding::new(format!("SM[F & G]: {a}, SM[F] & G: {b}"))))
        })?);
    }
    Ok(total)
}

/// `f` conjoined with `∀x(q(x) → q(x))` for every predicate `q` of `g` missing
/// from `f`. SM minimizes the predicates occurring in its argument, so this
/// makes SM[F] minimize the same predicates as SM[F ∧ G] without changing
/// anything else: the starred tautology is valid.
pub fn intensional_over(f: &Formula, g: &Formula) -> Result<Formula> {
    let own = signature_of(f)?.predicates;
    let extra = signature_of(g)?
        .predicates
        .into_iter()
        .filter(|(q, _)| !own.contains_key(q))
        .map(|(q, arity)| {
            let xs: Vec<String> = (1..=arity).map(|i| format!("X{i}")).collect();
            let atom = Formula::atom(q, xs.iter().cloned().map(Term::Var).collect());
            xs.into_iter().rev().fold(atom.clone().implies(atom), |acc, x| Formula::forall(x, acc))
        });
    Ok(Formula::conjunction(std::iter::once(f.clone()).chain(extra)))
}

/// The semi-safe sentence whose grounding is not equivalent under SPP.
pub const SEMI_SAFE_COUNTEREXAMPLE: &str = "forall X (not not p(X, a))";

/// The safe sentence for which the equivalence needs decidable equality.
pub const DECIDABLE_EQUALITY_EXAMPLE: &str =
    "forall X (((X = a | X = b) -> p(X)) | ((X = a | X = b) -> q(X)))";

fn counterexample_suite(options: &VerifyOptions) -> Result<VerificationReport> {
    let entry = |name: &str, text: &str| -> Result<CorpusEntry> {
        let formula = parse(text)?;
        let prenex = to_prenex(&formula)?;
        Ok(CorpusEntry {
            name: name.to_owned(),
            verdict: crate::safety::is_safe(&prenex).verdict,
            text: text.to_owned(),
            formula,
            prenex,
            line: 0,
        })
    };
    let dnn = entry("double_negation", SEMI_SAFE_COUNTEREXAMPLE)?;
    let de = entry("decidable_equality_example", DECIDABLE_EQUALITY_EXAMPLE)?;
    let found = grounding_equivalence(
        Suite::Counterexamples,
        &dnn,
        &dnn.prenex,
        &ConstantSet::from(dnn.formula.constants()),
        options,
    )?;
    let control = grounding_equivalence(
        Suite::Counterexamples,
        &de,
        &de.prenex,
        &ConstantSet::from(de.formula.constants()),
        options,
    )?;
    let notes = vec![
        format!("{} is {}", dnn.text, dnn.verdict),
        format!(
            "{} is {}; SPP_c entails its grounding equivalence classically ({} interpretations, {} failures); \
             the failure without decidable equality is intuitionistic and has no finite classical test",
            de.text, de.verdict, control.instances, control.violations
        ),
    ];
    Ok(VerificationReport {
        suite: Suite::Counterexamples,
        expectation: Expectation::Counterexample,
        entries: 2,
        instances: found.instances + control.instances,
        violations: found.violations,
        control_failures: control.violations,
        counterexample: found.counterexample,
        skipped: Vec::new(),
        notes,
        runtime: Duration::ZERO,
    })
}

fn named_valuation(i: &Interpretation, w: &NamedValuation) -> Result<PredicateValuation> {
    w.iter()
        .map(|(p, tuples)| {
            let tuples = tuples
                .iter()
                .map(|t| {
                    t.iter()
                        .map(|e| i.element(e).ok_or_else(|| Error::MalformedInterpretation(format!("unknown element {e}"))))
                        .collect::<Result<Vec<usize>>>()
                })
                .collect::<Result<BTreeSet<_>>>()?;
            Ok((p.clone(), tuples))
        })
        .collect()
}

/// Re-checks a counterexample with the reference evaluator. Returns whether
/// the violation is reproduced.
pub fn replay(cx: &Counterexample, budget: Budget) -> Result<bool> {
    let i = &cx.interpretation;
    let formula = parse(&cx.formula)?;
    let c = ConstantSet::new(cx.constants.iter().cloned());
    let stable = |f: &Formula, i: &Interpretation| is_stable_with(f, i, budget);
    Ok(match cx.suite {
        Suite::Prop1 => {
            let sig = signature_of(&formula)?;
            stable(&formula, i)? && !holds(&spp_formula(&sig, &c), i, None)?
        }
        Suite::Prop2 | Suite::Counterexamples => {
            let s = to_prenex(&formula)?;
            let sig = signature_of(&formula)?;
            let g = ground(&s, &c, GroundOptions::default())?;
            holds(&spp_formula(&sig, &c), i, None)? && holds(&g, i, None)? != holds(&formula, i, None)?
        }
        Suite::Prop3 => {
            let g = ground(&to_prenex(&formula)?, &c, GroundOptions::default())?;
            stable(&formula, i)? != stable(&g, i)?
        }
        Suite::Prop4 => {
            let ch = characterize_with(&to_prenex(&formula)?, budget)?;
            stable(&formula, i)? != holds(&ch.formula(), i, None)?
        }
        Suite::Prop5 => {
            let extra = cx.extension.unwrap_or(1);
            let fresh: Vec<String> = (1..)
                .map(|k| format!("w{k}"))
                .filter(|w| !i.universe.contains(w))
                .take(extra)
                .collect();
            stable(&formula, i)? != stable(&formula, &extend(i, &fresh)?)?
        }
        Suite::Lemma1 => {
            let Some(w) = &cx.witness else {
                return Ok(false);
            };
            let u = named_valuation(i, w)?;
            let below = u
                .iter()
                .all(|(p, tuples)| i.predicates.get(p).is_some_and(|r| tuples.is_subset(&r.tuples)));
            below && holds(&star(&formula).starred, i, Some(&u))? && !holds(&formula, i, None)?
        }
        Suite::Lemma2 | Suite::Lemma3 => !holds(&formula, i, None)?,
        Suite::Negsplit => {
            let Some(g) = &cx.negative else {
                return Ok(false);
            };
            let g = parse(g)?;
            let alone = intensional_over(&formula, &g)?;
            stable(&formula.clone().and(g.clone()), i)? != (stable(&alone, i)? && holds(&g, i, None)?)
        }
    })
}
