//! First-order formulas without function symbols.
//!
//! The primitive connectives are `⊥ ∧ ∨ →` and the quantifiers `∀ ∃`.
//! Negation, truth and equivalence only exist as abbreviations:
//! `¬F` is `F → ⊥`, `⊤` is `⊥ → ⊥` and `F ↔ G` is `(F → G) ∧ (G → F)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Suffix appended to a predicate name to obtain the name of its mirror
/// predicate variable in a starred formula. The parser never produces it.
pub const MIRROR_SUFFIX: char = '\'';

pub fn mirror_name(predicate: &str) -> String {
    format!("{predicate}{MIRROR_SUFFIX}")
}

/// Splits a predicate name into its base name and whether it names a mirror.
pub fn split_mirror(name: &str) -> (&str, bool) {
    match name.strip_suffix(MIRROR_SUFFIX) {
        Some(base) => (base, true),
        None => (name, false),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Term {
    Var(String),
    Const(String),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Self {
        Term::Const(name.into())
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            Term::Var(v) => Some(v),
            Term::Const(_) => None,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) | Term::Const(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantifier {
    Forall,
    Exists,
}

impl Quantifier {
    pub fn dual(self) -> Self {
        match self {
            Quantifier::Forall => Quantifier::Exists,
            Quantifier::Exists => Quantifier::Forall,
        }
    }
}

impl fmt::Display for Quantifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantifier::Forall => write!(f, "forall"),
            Quantifier::Exists => write!(f, "exists"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Bot,
    Pred { name: String, args: Vec<Term> },
    Eq(Term, Term),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>, args: Vec<Term>) -> Self {
        Formula::Pred {
            name: name.into(),
            args,
        }
    }

    pub fn prop(name: impl Into<String>) -> Self {
        Formula::atom(name, Vec::new())
    }

    pub fn eq(left: Term, right: Term) -> Self {
        Formula::Eq(left, right)
    }

    pub fn and(self, other: Formula) -> Self {
        Formula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Formula) -> Self {
        Formula::Or(Box::new(self), Box::new(other))
    }

    pub fn implies(self, other: Formula) -> Self {
        Formula::Implies(Box::new(self), Box::new(other))
    }

    pub fn not(self) -> Self {
        self.implies(Formula::Bot)
    }

    pub fn top() -> Self {
        Formula::Bot.implies(Formula::Bot)
    }

    pub fn iff(self, other: Formula) -> Self {
        self.clone()
            .implies(other.clone())
            .and(other.implies(self))
    }

    pub fn forall(var: impl Into<String>, body: Formula) -> Self {
        Formula::Forall(var.into(), Box::new(body))
    }

    pub fn exists(var: impl Into<String>, body: Formula) -> Self {
        Formula::Exists(var.into(), Box::new(body))
    }

    pub fn quantified(q: Quantifier, var: impl Into<String>, body: Formula) -> Self {
        match q {
            Quantifier::Forall => Formula::forall(var, body),
            Quantifier::Exists => Formula::exists(var, body),
        }
    }

    /// Left-nested conjunction; the empty conjunction is `⊤`.
    pub fn conjunction(items: impl IntoIterator<Item = Formula>) -> Self {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or_else(Formula::top)
    }

    /// Left-nested disjunction; the empty disjunction is `⊥`.
    pub fn disjunction(items: impl IntoIterator<Item = Formula>) -> Self {
        items.into_iter().reduce(Formula::or).unwrap_or(Formula::Bot)
    }

    pub fn is_bot(&self) -> bool {
        matches!(self, Formula::Bot)
    }

    pub fn is_top(&self) -> bool {
        matches!(self, Formula::Implies(a, b) if a.is_bot() && b.is_bot())
    }

    /// The operand of a negation `F → ⊥`, unless the formula is `⊤`.
    pub fn negated(&self) -> Option<&Formula> {
        match self {
            Formula::Implies(a, b) if b.is_bot() && !a.is_bot() => Some(a),
            _ => None,
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Bot | Formula::Pred { .. } | Formula::Eq(..) => true,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.is_quantifier_free() && b.is_quantifier_free()
            }
            Formula::Forall(..) | Formula::Exists(..) => false,
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn is_variable_free(&self) -> bool {
        self.all_vars().is_empty()
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Bot => {}
            Formula::Pred { args, .. } => {
                for t in args {
                    if let Term::Var(v) = t {
                        if !bound.contains(v) {
                            out.insert(v.clone());
                        }
                    }
                }
            }
            Formula::Eq(l, r) => {
                for t in [l, r] {
                    if let Term::Var(v) = t {
                        if !bound.contains(v) {
                            out.insert(v.clone());
                        }
                    }
                }
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(x, body) | Formula::Exists(x, body) => {
                bound.push(x.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Every variable name occurring in the formula, bound or free, including
    /// binders that bind nothing.
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Pred { args, .. } => {
                out.extend(args.iter().filter_map(|t| t.as_var().map(str::to_owned)))
            }
            Formula::Eq(l, r) => {
                out.extend([l, r].into_iter().filter_map(|t| t.as_var().map(str::to_owned)))
            }
            Formula::Forall(x, _) | Formula::Exists(x, _) => {
                out.insert(x.clone());
            }
            _ => {}
        });
        out
    }

    /// Binders in pre-order.
    pub fn binders(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.visit(&mut |f| {
            if let Formula::Forall(x, _) | Formula::Exists(x, _) = f {
                out.push(x.clone());
            }
        });
        out
    }

    /// The object constants occurring in the formula, `c(F)`.
    pub fn constants(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Pred { args, .. } => out.extend(args.iter().filter_map(|t| match t {
                Term::Const(c) => Some(c.clone()),
                Term::Var(_) => None,
            })),
            Formula::Eq(l, r) => out.extend([l, r].into_iter().filter_map(|t| match t {
                Term::Const(c) => Some(c.clone()),
                Term::Var(_) => None,
            })),
            _ => {}
        });
        out
    }

    /// Pre-order traversal of all subformula occurrences.
    pub fn visit<'a>(&'a self, visitor: &mut impl FnMut(&'a Formula)) {
        visitor(self);
        match self {
            Formula::Bot | Formula::Pred { .. } | Formula::Eq(..) => {}
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.visit(visitor);
                b.visit(visitor);
            }
            Formula::Forall(_, body) | Formula::Exists(_, body) => body.visit(visitor),
        }
    }

    /// Bottom-up rebuild; `map` sees each node after its children were mapped.
    pub fn map_bottom_up(&self, map: &mut impl FnMut(Formula) -> Formula) -> Formula {
        let rebuilt = match self {
            Formula::Bot | Formula::Pred { .. } | Formula::Eq(..) => self.clone(),
            Formula::And(a, b) => Formula::And(
                Box::new(a.map_bottom_up(map)),
                Box::new(b.map_bottom_up(map)),
            ),
            Formula::Or(a, b) => Formula::Or(
                Box::new(a.map_bottom_up(map)),
                Box::new(b.map_bottom_up(map)),
            ),
            Formula::Implies(a, b) => Formula::Implies(
                Box::new(a.map_bottom_up(map)),
                Box::new(b.map_bottom_up(map)),
            ),
            Formula::Forall(x, body) => Formula::Forall(x.clone(), Box::new(body.map_bottom_up(map))),
            Formula::Exists(x, body) => Formula::Exists(x.clone(), Box::new(body.map_bottom_up(map))),
        };
        map(rebuilt)
    }

    /// Number of nodes in the syntax tree (terms not counted).
    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    /// Flattens a left- or right-nested conjunction into its conjuncts.
    pub fn conjuncts(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        fn go<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
            match f {
                Formula::And(a, b) => {
                    go(a, out);
                    go(b, out);
                }
                _ => out.push(f),
            }
        }
        go(self, &mut out);
        out
    }

    pub fn universal_closure(&self) -> Formula {
        self.free_vars()
            .into_iter()
            .rev()
            .fold(self.clone(), |acc, v| Formula::forall(v, acc))
    }

    pub fn node_at(&self, path: &OccurrencePath) -> Result<Node<'_>> {
        let mut node = Node::Formula(self);
        for &step in &path.0 {
            node = match node {
                Node::Formula(f) => match (f, step) {
                    (Formula::Pred { args, .. }, i) if i < args.len() => Node::Term(&args[i]),
                    (Formula::Eq(l, _), 0) => Node::Term(l),
                    (Formula::Eq(_, r), 1) => Node::Term(r),
                    (Formula::And(a, _) | Formula::Or(a, _) | Formula::Implies(a, _), 0) => {
                        Node::Formula(a)
                    }
                    (Formula::And(_, b) | Formula::Or(_, b) | Formula::Implies(_, b), 1) => {
                        Node::Formula(b)
                    }
                    (Formula::Forall(_, body) | Formula::Exists(_, body), 0) => Node::Formula(body),
                    _ => return Err(Error::InvalidPath(path.to_string())),
                },
                Node::Term(_) => return Err(Error::InvalidPath(path.to_string())),
            };
        }
        Ok(node)
    }

    /// Every subformula occurrence together with its path, pre-order.
    pub fn subformulas(&self) -> Vec<(OccurrencePath, &Formula)> {
        let mut out = Vec::new();
        fn go<'a>(f: &'a Formula, path: &mut Vec<usize>, out: &mut Vec<(OccurrencePath, &'a Formula)>) {
            out.push((OccurrencePath(path.clone()), f));
            match f {
                Formula::Bot | Formula::Pred { .. } | Formula::Eq(..) => {}
                Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                    path.push(0);
                    go(a, path, out);
                    path.pop();
                    path.push(1);
                    go(b, path, out);
                    path.pop();
                }
                Formula::Forall(_, body) | Formula::Exists(_, body) => {
                    path.push(0);
                    go(body, path, out);
                    path.pop();
                }
            }
        }
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Every occurrence of a variable inside an atom, with its path. The last
    /// step of the path is the argument position.
    pub fn var_occurrences(&self) -> Vec<(String, OccurrencePath)> {
        let mut out = Vec::new();
        for (path, f) in self.subformulas() {
            let args: Vec<&Term> = match f {
                Formula::Pred { args, .. } => args.iter().collect(),
                Formula::Eq(l, r) => vec![l, r],
                _ => continue,
            };
            for (i, t) in args.into_iter().enumerate() {
                if let Term::Var(v) = t {
                    out.push((v.clone(), path.child(i)));
                }
            }
        }
        out
    }

    /// Replaces free occurrences of `var` by `term`, renaming binders that would
    /// capture a variable of `term`.
    pub fn substitute_term(&self, var: &str, term: &Term) -> Formula {
        let mut map = BTreeMap::new();
        map.insert(var.to_owned(), term.clone());
        self.substitute(&map)
    }

    /// Simultaneous capture-avoiding substitution of terms for free variables.
    pub fn substitute(&self, map: &BTreeMap<String, Term>) -> Formula {
        let subst_term = |t: &Term| match t {
            Term::Var(v) => map.get(v).cloned().unwrap_or_else(|| t.clone()),
            Term::Const(_) => t.clone(),
        };
        match self {
            Formula::Bot => Formula::Bot,
            Formula::Pred { name, args } => Formula::Pred {
                name: name.clone(),
                args: args.iter().map(subst_term).collect(),
            },
            Formula::Eq(l, r) => Formula::Eq(subst_term(l), subst_term(r)),
            Formula::And(a, b) => Formula::And(Box::new(a.substitute(map)), Box::new(b.substitute(map))),
            Formula::Or(a, b) => Formula::Or(Box::new(a.substitute(map)), Box::new(b.substitute(map))),
            Formula::Implies(a, b) => {
                Formula::Implies(Box::new(a.substitute(map)), Box::new(b.substitute(map)))
            }
            Formula::Forall(x, body) | Formula::Exists(x, body) => {
                let mut inner = map.clone();
                inner.remove(x);
                let free = body.free_vars();
                inner.retain(|v, _| free.contains(v));
                if inner.is_empty() {
                    return self.clone();
                }
                let captures = inner
                    .values()
                    .any(|t| matches!(t, Term::Var(y) if y == x));
                let binder = if captures {
                    let mut avoid = body.all_vars();
                    avoid.extend(inner.keys().cloned());
                    avoid.extend(inner.values().filter_map(|t| t.as_var().map(str::to_owned)));
                    let fresh = fresh_var(&avoid);
                    inner.insert(x.clone(), Term::Var(fresh.clone()));
                    fresh
                } else {
                    x.clone()
                };
                let body = Box::new(body.substitute(&inner));
                match self {
                    Formula::Forall(..) => Formula::Forall(binder, body),
                    _ => Formula::Exists(binder, body),
                }
            }
        }
    }

    /// Renames every binder whose name is in `avoid` to a fresh name.
    pub fn rename_binders(&self, avoid: &BTreeSet<String>) -> Formula {
        if avoid.is_empty() {
            return self.clone();
        }
        let mut used = self.all_vars();
        used.extend(avoid.iter().cloned());
        self.rename_binders_in(avoid, &mut used)
    }

    fn rename_binders_in(&self, avoid: &BTreeSet<String>, used: &mut BTreeSet<String>) -> Formula {
        match self {
            Formula::Bot | Formula::Pred { .. } | Formula::Eq(..) => self.clone(),
            Formula::And(a, b) => Formula::And(
                Box::new(a.rename_binders_in(avoid, used)),
                Box::new(b.rename_binders_in(avoid, used)),
            ),
            Formula::Or(a, b) => Formula::Or(
                Box::new(a.rename_binders_in(avoid, used)),
                Box::new(b.rename_binders_in(avoid, used)),
            ),
            Formula::Implies(a, b) => Formula::Implies(
                Box::new(a.rename_binders_in(avoid, used)),
                Box::new(b.rename_binders_in(avoid, used)),
            ),
            Formula::Forall(x, body) | Formula::Exists(x, body) => {
                let (binder, body) = if avoid.contains(x) {
                    let fresh = fresh_var(used);
                    used.insert(fresh.clone());
                    let renamed = body.substitute_term(x, &Term::Var(fresh.clone()));
                    (fresh, renamed)
                } else {
                    (x.clone(), (**body).clone())
                };
                let body = Box::new(body.rename_binders_in(avoid, used));
                match self {
                    Formula::Forall(..) => Formula::Forall(binder, body),
                    _ => Formula::Exists(binder, body),
                }
            }
        }
    }

    /// Renames binders so that no two quantifiers bind the same name and no
    /// binder reuses the name of a free variable. The first binder of each
    /// name keeps it.
    pub fn distinct_binders(&self) -> Formula {
        let mut used = self.all_vars();
        let mut seen = self.free_vars();
        self.distinct_in(&mut seen, &mut used)
    }

    fn distinct_in(&self, seen: &mut BTreeSet<String>, used: &mut BTreeSet<String>) -> Formula {
        match self {
            Formula::Bot | Formula::Pred { .. } | Formula::Eq(..) => self.clone(),
            Formula::And(a, b) => {
                let a = a.distinct_in(seen, used);
                Formula::And(Box::new(a), Box::new(b.distinct_in(seen, used)))
            }
            Formula::Or(a, b) => {
                let a = a.distinct_in(seen, used);
                Formula::Or(Box::new(a), Box::new(b.distinct_in(seen, used)))
            }
            Formula::Implies(a, b) => {
                let a = a.distinct_in(seen, used);
                Formula::Implies(Box::new(a), Box::new(b.distinct_in(seen, used)))
            }
            Formula::Forall(x, body) | Formula::Exists(x, body) => {
                let (binder, body) = if seen.contains(x) {
                    let fresh = fresh_var(used);
                    used.insert(fresh.clone());
                    (fresh.clone(), body.substitute_term(x, &Term::Var(fresh)))
                } else {
                    (x.clone(), (**body).clone())
                };
                seen.insert(binder.clone());
                let body = Box::new(body.distinct_in(seen, used));
                match self {
                    Formula::Forall(..) => Formula::Forall(binder, body),
                    _ => Formula::Exists(binder, body),
                }
            }
        }
    }

    /// Structural equality up to the names of bound variables.
    pub fn alpha_eq(&self, other: &Formula) -> bool {
        fn term_eq(a: &Term, b: &Term, la: &[String], lb: &[String]) -> bool {
            match (a, b) {
                (Term::Const(x), Term::Const(y)) => x == y,
                (Term::Var(x), Term::Var(y)) => {
                    let ia = la.iter().rposition(|v| v == x);
                    let ib = lb.iter().rposition(|v| v == y);
                    match (ia, ib) {
                        (Some(i), Some(j)) => i == j,
                        (None, None) => x == y,
                        _ => false,
                    }
                }
                _ => false,
            }
        }
        fn go(a: &Formula, b: &Formula, la: &mut Vec<String>, lb: &mut Vec<String>) -> bool {
            match (a, b) {
                (Formula::Bot, Formula::Bot) => true,
                (Formula::Pred { name: n1, args: a1 }, Formula::Pred { name: n2, args: a2 }) => {
                    n1 == n2
                        && a1.len() == a2.len()
                        && a1.iter().zip(a2).all(|(x, y)| term_eq(x, y, la, lb))
                }
                (Formula::Eq(l1, r1), Formula::Eq(l2, r2)) => {
                    term_eq(l1, l2, la, lb) && term_eq(r1, r2, la, lb)
                }
                (Formula::And(a1, b1), Formula::And(a2, b2))
                | (Formula::Or(a1, b1), Formula::Or(a2, b2))
                | (Formula::Implies(a1, b1), Formula::Implies(a2, b2)) => {
                    go(a1, a2, la, lb) && go(b1, b2, la, lb)
                }
                (Formula::Forall(x, f), Formula::Forall(y, g))
                | (Formula::Exists(x, f), Formula::Exists(y, g)) => {
                    la.push(x.clone());
                    lb.push(y.clone());
                    let eq = go(f, g, la, lb);
                    la.pop();
                    lb.pop();
                    eq
                }
                _ => false,
            }
        }
        go(self, other, &mut Vec::new(), &mut Vec::new())
    }
}

/// Picks the first of `X1, X2, …` not in `used`.
pub fn fresh_var(used: &BTreeSet<String>) -> String {
    (1..)
        .map(|i| format!("X{i}"))
        .find(|v| !used.contains(v))
        .expect("unbounded supply of names")
}

/// A node addressed by an [`OccurrencePath`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Node<'a> {
    Formula(&'a Formula),
    Term(&'a Term),
}

/// Child selectors from the root: `0`/`1` pick the left/right operand of a
/// binary connective (or the sides of an equality), `0` picks a quantifier
/// body, and `i` picks the `i`-th argument of an atom.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OccurrencePath(pub Vec<usize>);

impl OccurrencePath {
    pub fn root() -> Self {
        OccurrencePath(Vec::new())
    }

    pub fn child(&self, step: usize) -> Self {
        let mut steps = self.0.clone();
        steps.push(step);
        OccurrencePath(steps)
    }

    pub fn is_prefix_of(&self, other: &OccurrencePath) -> bool {
        other.0.starts_with(&self.0)
    }

    /// All prefixes, from the root down to the path itself.
    pub fn ancestors(&self) -> impl Iterator<Item = OccurrencePath> + '_ {
        (0..=self.0.len()).map(|n| OccurrencePath(self.0[..n].to_vec()))
    }
}

impl fmt::Display for OccurrencePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        let steps: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "{}", steps.join("."))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Polarity {
    pub positive: bool,
    pub strictly_positive: bool,
}

/// Polarity of the occurrence at `path`: positive iff the number of
/// implications having it in their antecedent is even, strictly positive iff
/// that number is zero.
pub fn polarity(f: &Formula, path: &OccurrencePath) -> Result<Polarity> {
    f.node_at(path)?;
    let mut antecedents = 0usize;
    let mut node = f;
    for &step in &path.0 {
        match node {
            Formula::Implies(a, b) => {
                if step == 0 {
                    antecedents += 1;
                    node = a;
                } else {
                    node = b;
                }
            }
            Formula::And(a, b) | Formula::Or(a, b) => node = if step == 0 { a } else { b },
            Formula::Forall(_, body) | Formula::Exists(_, body) => node = body,
            // terms: the remaining step is an argument index
            Formula::Bot | Formula::Pred { .. } | Formula::Eq(..) => break,
        }
    }
    Ok(Polarity {
        positive: antecedents.is_multiple_of(2),
        strictly_positive: antecedents == 0,
    })
}

/// The signature `σ(F)`: object constants and predicate constants with arities.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub constants: BTreeSet<String>,
    pub predicates: BTreeMap<String, usize>,
}

impl Signature {
    pub fn add_predicate(&mut self, name: &str, arity: usize) -> Result<()> {
        match self.predicates.get(name) {
            Some(&known) if known != arity => Err(Error::ArityConflict {
                predicate: name.to_owned(),
                first: known,
                second: arity,
            }),
            Some(_) => Ok(()),
            None => {
                self.predicates.insert(name.to_owned(), arity);
                Ok(())
            }
        }
    }

    pub fn merge(&mut self, other: &Signature) -> Result<()> {
        self.constants.extend(other.constants.iter().cloned());
        for (p, &arity) in &other.predicates {
            self.add_predicate(p, arity)?;
        }
        Ok(())
    }

    pub fn with_constants(mut self, constants: impl IntoIterator<Item = String>) -> Self {
        self.constants.extend(constants);
        self
    }
}

pub fn signature_of(f: &Formula) -> Result<Signature> {
    let mut sig = Signature {
        constants: f.constants(),
        predicates: BTreeMap::new(),
    };
    let mut result = Ok(());
    f.visit(&mut |g| {
        if let Formula::Pred { name, args } = g {
            if result.is_ok() {
                result = sig.add_predicate(name, args.len());
            }
        }
    });
    result.map(|()| sig)
}

/// `λx₁…xₘ F`; applying it to terms `t₁…tₘ` yields `F[x := t]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PredicateExpression {
    pub params: Vec<String>,
    pub body: Formula,
}

impl PredicateExpression {
    pub fn new(params: Vec<String>, body: Formula) -> Self {
        PredicateExpression { params, body }
    }

    /// `λx p(x)` for a predicate of the given arity.
    pub fn identity(predicate: &str, arity: usize) -> Self {
        let params: Vec<String> = (1..=arity).map(|i| format!("X{i}")).collect();
        let body = Formula::atom(predicate, params.iter().cloned().map(Term::Var).collect());
        PredicateExpression { params, body }
    }

    pub fn arity(&self) -> usize {
        self.params.len()
    }

    pub fn apply(&self, args: &[Term]) -> Formula {
        let map: BTreeMap<String, Term> = self.params.iter().cloned().zip(args.iter().cloned()).collect();
        self.body.substitute(&map)
    }

    /// Free variables of the body that are not parameters.
    pub fn parameters_free(&self) -> BTreeSet<String> {
        let mut free = self.body.free_vars();
        for p in &self.params {
            free.remove(p);
        }
        free
    }
}

/// `G(e)`: replaces every atom `p(t)` of `g` with `p` in `exprs` by the body of
/// `exprs[p]` instantiated at `t`. Binders of `g` that would capture a free
/// variable of an expression are renamed first.
pub fn substitute_pred_exprs(
    g: &Formula,
    exprs: &BTreeMap<String, PredicateExpression>,
) -> Result<Formula> {
    let mut check = Ok(());
    g.visit(&mut |f| {
        if let Formula::Pred { name, args } = f {
            if let Some(e) = exprs.get(name) {
                if e.arity() != args.len() && check.is_ok() {
                    check = Err(Error::ArityConflict {
                        predicate: name.clone(),
                        first: args.len(),
                        second: e.arity(),
                    });
                }
            }
        }
    });
    check?;
    let avoid: BTreeSet<String> = exprs.values().flat_map(|e| e.parameters_free()).collect();
    let g = g.rename_binders(&avoid);
    Ok(g.map_bottom_up(&mut |f| match f {
        Formula::Pred { ref name, ref args } => match exprs.get(name) {
            Some(e) => e.apply(args),
            None => f,
        },
        other => other,
    }))
}
