//! Compiled evaluation over small finite structures.
//!
//! Relations are bitsets indexed by tuple number (big-endian base-`n` digits),
//! so a predicate of arity `m` over `n` elements needs `n^m ≤ 64`.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::formula::{split_mirror, Formula, Signature, Term};
use crate::sm::interpretation::{Interpretation, PredicateValuation, Relation};

/// Default cap on the number of candidates a single enumeration may visit.
pub const DEFAULT_BUDGET: u64 = 1 << 20;

/// Environment variable overriding [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "SMSAFE_BUDGET";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_candidates: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_candidates: DEFAULT_BUDGET,
        }
    }
}

impl Budget {
    pub fn new(max_candidates: u64) -> Self {
        Budget { max_candidates }
    }

    pub fn from_env() -> Self {
        std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(Budget::new)
            .unwrap_or_default()
    }

    pub fn check(&self, what: &str, needed: u128) -> Result<()> {
        if needed > self.max_candidates as u128 {
            return Err(Error::Budget {
                what: what.to_owned(),
                needed,
                limit: self.max_candidates,
            });
        }
        Ok(())
    }
}

/// How object constants may be mapped into a universe.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstMaps {
    /// Every function from constants to elements, collisions included.
    All,
    /// The single map sending the `i`-th constant to element `i`; requires at
    /// least as many elements as constants.
    Distinct,
}

/// Indexing of a signature's symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vocabulary {
    pub constants: Vec<String>,
    pub predicates: Vec<(String, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Structure {
    pub size: usize,
    pub constants: Vec<u8>,
    pub relations: Vec<u64>,
}

#[derive(Clone, Copy, Debug)]
enum Arg {
    Var(usize),
    Const(usize),
}

#[derive(Clone, Debug)]
enum Node {
    False,
    Atom { pred: usize, mirror: bool, args: Vec<Arg> },
    Eq(Arg, Arg),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Implies(Box<Node>, Box<Node>),
    Forall(usize, Box<Node>),
    Exists(usize, Box<Node>),
}

/// A sentence compiled against a [`Vocabulary`].
#[derive(Clone, Debug)]
pub struct Compiled {
    root: Node,
    slots: usize,
    pub uses_mirrors: bool,
}

fn tuple_count(size: usize, arity: usize) -> Option<usize> {
    size.checked_pow(arity as u32)
}

fn pow2(bits: usize) -> u128 {
    if bits >= 127 {
        u128::MAX
    } else {
        1u128 << bits
    }
}

impl Vocabulary {
    pub fn new(sig: &Signature) -> Self {
        Vocabulary {
            constants: sig.constants.iter().cloned().collect(),
            predicates: sig.predicates.iter().map(|(p, &a)| (p.clone(), a)).collect(),
        }
    }

    pub fn signature(&self) -> Signature {
        Signature {
            constants: self.constants.iter().cloned().collect(),
            predicates: self.predicates.iter().cloned().collect(),
        }
    }

    pub fn pred_index(&self, name: &str) -> Option<usize> {
        self.predicates.iter().position(|(p, _)| p == name)
    }

    pub fn const_index(&self, name: &str) -> Option<usize> {
        self.constants.iter().position(|c| c == name)
    }

    pub fn compile(&self, f: &Formula) -> Result<Compiled> {
        if let Some(v) = f.free_vars().into_iter().next() {
            return Err(Error::FreeVariables(vec![v]));
        }
        let mut scope = Vec::new();
        let mut slots = 0;
        let mut uses_mirrors = false;
        let root = self.compile_node(f, &mut scope, &mut slots, &mut uses_mirrors)?;
        Ok(Compiled {
            root,
            slots,
            uses_mirrors,
        })
    }

    fn compile_arg(&self, t: &Term, scope: &[(String, usize)]) -> Result<Arg> {
        match t {
            Term::Const(c) => self
                .const_index(c)
                .map(Arg::Const)
                .ok_or_else(|| Error::UncoveredSymbol(c.clone())),
            Term::Var(v) => scope
                .iter()
                .rev()
                .find(|(name, _)| name == v)
                .map(|&(_, slot)| Arg::Var(slot))
                .ok_or_else(|| Error::FreeVariables(vec![v.clone()])),
        }
    }

    fn compile_node(
        &self,
        f: &Formula,
        scope: &mut Vec<(String, usize)>,
        slots: &mut usize,
        uses_mirrors: &mut bool,
    ) -> Result<Node> {
        Ok(match f {
            Formula::Bot => Node::False,
            Formula::Pred { name, args } => {
                let (base, mirror) = split_mirror(name);
                let pred = self
                    .pred_index(base)
                    .ok_or_else(|| Error::UncoveredSymbol(base.to_owned()))?;
                let arity = self.predicates[pred].1;
                if arity != args.len() {
                    return Err(Error::ArityConflict {
                        predicate: base.to_owned(),
                        first: arity,
                        second: args.len(),
                    });
                }
                *uses_mirrors |= mirror;
                Node::Atom {
                    pred,
                    mirror,
                    args: args
                        .iter()
                        .map(|t| self.compile_arg(t, scope))
                        .collect::<Result<_>>()?,
                }
            }
            Formula::Eq(l, r) => Node::Eq(self.compile_arg(l, scope)?, self.compile_arg(r, scope)?),
            Formula::And(a, b) => Node::And(
                Box::new(self.compile_node(a, scope, slots, uses_mirrors)?),
                Box::new(self.compile_node(b, scope, slots, uses_mirrors)?),
            ),
            Formula::Or(a, b) => Node::Or(
                Box::new(self.compile_node(a, scope, slots, uses_mirrors)?),
                Box::new(self.compile_node(b, scope, slots, uses_mirrors)?),
            ),
            Formula::Implies(a, b) => Node::Implies(
                Box::new(self.compile_node(a, scope, slots, uses_mirrors)?),
                Box::new(self.compile_node(b, scope, slots, uses_mirrors)?),
            ),
            Formula::Forall(x, body) | Formula::Exists(x, body) => {
                let slot = *slots;
                *slots += 1;
                scope.push((x.clone(), slot));
                let body = self.compile_node(body, scope, slots, uses_mirrors);
                scope.pop();
                let body = Box::new(body?);
                match f {
                    Formula::Forall(..) => Node::Forall(slot, body),
                    _ => Node::Exists(slot, body),
                }
            }
        })
    }

    /// Number of tuples of each predicate in a universe of `size` elements.
    pub fn tuple_counts(&self, size: usize) -> Result<Vec<usize>> {
        self.predicates
            .iter()
            .map(|(p, arity)| match tuple_count(size, *arity) {
                Some(n) if n <= 64 => Ok(n),
                _ => Err(Error::Budget {
                    what: format!("relation {p}/{arity} over {size} elements"),
                    needed: (size as u128).saturating_pow(*arity as u32),
                    limit: 64,
                }),
            })
            .collect()
    }

    fn const_map_count(&self, size: usize, maps: ConstMaps) -> u128 {
        match maps {
            ConstMaps::All => (size as u128).saturating_pow(self.constants.len() as u32),
            ConstMaps::Distinct if size >= self.constants.len() => 1,
            ConstMaps::Distinct => 0,
        }
    }

    /// Number of structures of the given size; budget-checked.
    pub fn structure_count(&self, size: usize, maps: ConstMaps, budget: &Budget) -> Result<u128> {
        if size == 0 || size > u8::MAX as usize {
            return Err(Error::Unsupported(format!("universe size {size}")));
        }
        let bits: usize = self.tuple_counts(size)?.iter().sum();
        let count = self.const_map_count(size, maps).saturating_mul(pow2(bits));
        budget.check(&format!("interpretations of size {size}"), count)?;
        Ok(count)
    }

    /// The structure with the given index in enumeration order: constant maps
    /// vary slowest, relation bits fastest.
    pub fn structure_at(&self, size: usize, maps: ConstMaps, index: u128) -> Structure {
        let counts = self.tuple_counts(size).expect("checked by structure_count");
        let bits: usize = counts.iter().sum();
        let mut rel_index = index & (pow2(bits) - 1);
        let mut map_index = index >> bits;
        let constants = match maps {
            ConstMaps::All => {
                let mut out = vec![0u8; self.constants.len()];
                for slot in out.iter_mut().rev() {
                    *slot = (map_index % size as u128) as u8;
                    map_index /= size as u128;
                }
                out
            }
            ConstMaps::Distinct => (0..self.constants.len()).map(|i| i as u8).collect(),
        };
        let relations = counts
            .iter()
            .map(|&n| {
                let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
                let r = (rel_index as u64) & mask;
                rel_index = if n >= 128 { 0 } else { rel_index >> n };
                r
            })
            .collect();
        Structure {
            size,
            constants,
            relations,
        }
    }

    /// Iterates every structure of the given size.
    pub fn structures(
        &self,
        size: usize,
        maps: ConstMaps,
        budget: &Budget,
    ) -> Result<impl Iterator<Item = Structure> + '_> {
        let count = self.structure_count(size, maps, budget)?;
        Ok((0..count).map(move |i| self.structure_at(size, maps, i)))
    }

    /// Element names used when converting structures back.
    pub fn element_names(size: usize) -> Vec<String> {
        (1..=size).map(|i| format!("e{i}")).collect()
    }

    pub fn to_interpretation(&self, s: &Structure, elements: &[String]) -> Interpretation {
        let predicates = self
            .predicates
            .iter()
            .zip(&s.relations)
            .map(|((p, arity), &bits)| {
                let tuples = (0..64)
                    .filter(|b| bits >> b & 1 == 1)
                    .map(|b| decode_tuple(b, s.size, *arity))
                    .collect();
                (p.clone(), Relation { arity: *arity, tuples })
            })
            .collect();
        Interpretation {
            universe: elements.to_vec(),
            constants: self
                .constants
                .iter()
                .zip(&s.constants)
                .map(|(c, &e)| (c.clone(), e as usize))
                .collect(),
            predicates,
        }
    }

    pub fn from_interpretation(&self, i: &Interpretation) -> Result<Structure> {
        let size = i.universe.len();
        let counts = self.tuple_counts(size)?;
        let constants = self
            .constants
            .iter()
            .map(|c| {
                i.constants
                    .get(c)
                    .map(|&e| e as u8)
                    .ok_or_else(|| Error::UncoveredSymbol(c.clone()))
            })
            .collect::<Result<_>>()?;
        let relations = self
            .predicates
            .iter()
            .zip(counts)
            .map(|((p, arity), _)| {
                let rel = i
                    .predicates
                    .get(p)
                    .ok_or_else(|| Error::UncoveredSymbol(p.clone()))?;
                if rel.arity != *arity {
                    return Err(Error::ArityConflict {
                        predicate: p.clone(),
                        first: *arity,
                        second: rel.arity,
                    });
                }
                Ok(rel
                    .tuples
                    .iter()
                    .fold(0u64, |acc, t| acc | 1 << encode_tuple(t, size)))
            })
            .collect::<Result<_>>()?;
        Ok(Structure {
            size,
            constants,
            relations,
        })
    }

    /// Bitset relations for a valuation of mirror predicates.
    pub fn mirror_bits(&self, size: usize, u: &PredicateValuation) -> Vec<u64> {
        self.predicates
            .iter()
            .map(|(p, _)| {
                u.get(p)
                    .into_iter()
                    .flatten()
                    .fold(0u64, |acc, t| acc | 1 << encode_tuple(t, size))
            })
            .collect()
    }

    pub fn valuation_from_bits(&self, size: usize, bits: &[u64], only: &BTreeSet<String>) -> PredicateValuation {
        self.predicates
            .iter()
            .zip(bits)
            .filter(|((p, _), _)| only.contains(p))
            .map(|((p, arity), &b)| {
                let tuples = (0..64)
                    .filter(|k| b >> k & 1 == 1)
                    .map(|k| decode_tuple(k, size, *arity))
                    .collect();
                (p.clone(), tuples)
            })
            .collect()
    }
}

pub fn encode_tuple(t: &[usize], size: usize) -> usize {
    t.iter().fold(0, |acc, &e| acc * size + e)
}

pub fn decode_tuple(mut index: usize, size: usize, arity: usize) -> Vec<usize> {
    let mut out = vec![0; arity];
    for slot in out.iter_mut().rev() {
        *slot = index % size;
        index /= size;
    }
    out
}

struct Ctx<'a> {
    s: &'a Structure,
    mirror: Option<&'a [u64]>,
}

impl Compiled {
    /// Evaluates the sentence; `mirror` supplies the mirror relations.
    pub fn eval(&self, s: &Structure, mirror: Option<&[u64]>) -> bool {
        assert!(
            mirror.is_some() || !self.uses_mirrors,
            "mirror predicates need a valuation"
        );
        let mut env = vec![0u8; self.slots];
        eval_node(&self.root, &Ctx { s, mirror }, &mut env)
    }
}

fn arg_value(a: Arg, s: &Structure, env: &[u8]) -> u8 {
    match a {
        Arg::Var(slot) => env[slot],
        Arg::Const(c) => s.constants[c],
    }
}

fn eval_node(node: &Node, ctx: &Ctx<'_>, env: &mut [u8]) -> bool {
    match node {
        Node::False => false,
        Node::Atom { pred, mirror, args } => {
            let n = ctx.s.size;
            let index = args
                .iter()
                .fold(0usize, |acc, &a| acc * n + arg_value(a, ctx.s, env) as usize);
            let bits = if *mirror {
                ctx.mirror.expect("checked in eval")[*pred]
            } else {
                ctx.s.relations[*pred]
            };
            bits >> index & 1 == 1
        }
        Node::Eq(l, r) => arg_value(*l, ctx.s, env) == arg_value(*r, ctx.s, env),
        Node::And(a, b) => eval_node(a, ctx, env) && eval_node(b, ctx, env),
        Node::Or(a, b) => eval_node(a, ctx, env) || eval_node(b, ctx, env),
        Node::Implies(a, b) => !eval_node(a, ctx, env) || eval_node(b, ctx, env),
        Node::Forall(slot, body) => (0..ctx.s.size as u8).all(|e| {
            env[*slot] = e;
            eval_node(body, ctx, env)
        }),
        Node::Exists(slot, body) => (0..ctx.s.size as u8).any(|e| {
            env[*slot] = e;
            eval_node(body, ctx, env)
        }),
    }
}

/// Canonical representative of a structure's isomorphism class: the
/// lexicographically least relabeling of its elements.
pub fn canonical_form(vocab: &Vocabulary, s: &Structure) -> Structure {
    let n = s.size;
    let mut best: Option<Structure> = None;
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        let candidate = relabel(vocab, s, &perm);
        if best.as_ref().is_none_or(|b| candidate < *b) {
            best = Some(candidate);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best.expect("at least the identity permutation")
}

fn relabel(vocab: &Vocabulary, s: &Structure, perm: &[usize]) -> Structure {
    let n = s.size;
    let relations = vocab
        .predicates
        .iter()
        .zip(&s.relations)
        .map(|((_, arity), &bits)| {
            (0..64usize)
                .filter(|b| bits >> b & 1 == 1)
                .map(|b| {
                    let t: Vec<usize> = decode_tuple(b, n, *arity).into_iter().map(|e| perm[e]).collect();
                    1u64 << encode_tuple(&t, n)
                })
                .fold(0, |acc, bit| acc | bit)
        })
        .collect();
    Structure {
        size: n,
        constants: s.constants.iter().map(|&e| perm[e as usize] as u8).collect(),
        relations,
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let Some(i) = (0..v.len() - 1).rev().find(|&i| v[i] < v[i + 1]) else {
        return false;
    };
    let j = (i + 1..v.len()).rev().find(|&j| v[j] > v[i]).expect("v[i+1] > v[i]");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

/// A relation-by-relation view of which predicates a stability check
/// minimizes.
pub fn predicate_mask(vocab: &Vocabulary, predicates: &BTreeMap<String, usize>) -> Vec<bool> {
    vocab
        .predicates
        .iter()
        .map(|(p, _)| predicates.contains_key(p))
        .collect()
}
