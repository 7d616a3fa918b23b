use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{split_mirror, Formula, Signature, Term};

/// A finite classical interpretation. Equality is identity on elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interpretation {
    /// Element names, pairwise distinct. Elements are referred to by index.
    pub universe: Vec<String>,
    pub constants: BTreeMap<String, usize>,
    pub predicates: BTreeMap<String, Relation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub arity: usize,
    pub tuples: BTreeSet<Vec<usize>>,
}

impl Relation {
    pub fn empty(arity: usize) -> Self {
        Relation {
            arity,
            tuples: BTreeSet::new(),
        }
    }
}

/// Denotations for the mirror predicates `u` of a starred formula, keyed by
/// the name of the predicate they mirror.
pub type PredicateValuation = BTreeMap<String, BTreeSet<Vec<usize>>>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroundAtom {
    pub predicate: String,
    pub args: Vec<String>,
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.args.is_empty() {
            write!(f, "{}", self.predicate)
        } else {
            write!(f, "{}({})", self.predicate, self.args.join(","))
        }
    }
}

impl Interpretation {
    /// The Herbrand interpretation over `constants` in which exactly `atoms`
    /// are true.
    pub fn herbrand(
        constants: &BTreeSet<String>,
        predicates: &BTreeMap<String, usize>,
        atoms: &BTreeSet<GroundAtom>,
    ) -> Result<Self> {
        let universe: Vec<String> = constants.iter().cloned().collect();
        let index: BTreeMap<&str, usize> =
            universe.iter().enumerate().map(|(i, c)| (c.as_str(), i)).collect();
        let mut rels: BTreeMap<String, Relation> = predicates
            .iter()
            .map(|(p, &arity)| (p.clone(), Relation::empty(arity)))
            .collect();
        for atom in atoms {
            let rel = rels
                .get_mut(&atom.predicate)
                .ok_or_else(|| Error::UncoveredSymbol(atom.predicate.clone()))?;
            let tuple = atom
                .args
                .iter()
                .map(|a| index.get(a.as_str()).copied().ok_or_else(|| Error::UncoveredSymbol(a.clone())))
                .collect::<Result<Vec<_>>>()?;
            if tuple.len() != rel.arity {
                return Err(Error::MalformedInterpretation(format!("arity of {atom}")));
            }
            rel.tuples.insert(tuple);
        }
        Ok(Interpretation {
            constants: universe.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect(),
            universe,
            predicates: rels,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.universe.len();
        if n == 0 {
            return Err(Error::MalformedInterpretation("empty universe".into()));
        }
        let distinct: BTreeSet<&String> = self.universe.iter().collect();
        if distinct.len() != n {
            return Err(Error::MalformedInterpretation("repeated element".into()));
        }
        if let Some((c, _)) = self.constants.iter().find(|(_, &e)| e >= n) {
            return Err(Error::MalformedInterpretation(format!("constant {c} out of range")));
        }
        for (p, rel) in &self.predicates {
            if rel.tuples.iter().any(|t| t.len() != rel.arity || t.iter().any(|&e| e >= n)) {
                return Err(Error::MalformedInterpretation(format!("bad tuple in {p}")));
            }
        }
        Ok(())
    }

    pub fn signature(&self) -> Signature {
        Signature {
            constants: self.constants.keys().cloned().collect(),
            predicates: self.predicates.iter().map(|(p, r)| (p.clone(), r.arity)).collect(),
        }
    }

    /// True atoms, named by element names.
    pub fn atoms(&self) -> BTreeSet<GroundAtom> {
        self.predicates
            .iter()
            .flat_map(|(p, rel)| {
                rel.tuples.iter().map(move |t| GroundAtom {
                    predicate: p.clone(),
                    args: t.iter().map(|&e| self.universe[e].clone()).collect(),
                })
            })
            .collect()
    }

    pub fn element(&self, name: &str) -> Option<usize> {
        self.universe.iter().position(|e| e == name)
    }

    /// Reads the wire form produced by [`Interpretation::to_json`]. Arities come
    /// from `signature` because empty relations carry none.
    pub fn from_json(text: &str, signature: &Signature) -> Result<Self> {
        let wire: WireModel = serde_json::from_str(text)
            .map_err(|e| Error::MalformedInterpretation(e.to_string()))?;
        let universe = wire.universe;
        let lookup = |name: &str| {
            universe
                .iter()
                .position(|e| e == name)
                .ok_or_else(|| Error::MalformedInterpretation(format!("unknown element {name}")))
        };
        let constants = wire
            .constants
            .iter()
            .map(|(c, e)| Ok((c.clone(), lookup(e)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        let mut predicates = BTreeMap::new();
        for (p, &arity) in &signature.predicates {
            let mut rel = Relation::empty(arity);
            for tuple in wire.predicates.get(p).into_iter().flatten() {
                rel.tuples
                    .insert(tuple.iter().map(|e| lookup(e)).collect::<Result<Vec<_>>>()?);
            }
            predicates.insert(p.clone(), rel);
        }
        let i = Interpretation {
            universe: universe.clone(),
            constants,
            predicates,
        };
        i.validate()?;
        Ok(i)
    }

    fn wire(&self) -> WireModel {
        let mut universe = self.universe.clone();
        universe.sort();
        let constants: BTreeMap<String, String> = self
            .constants
            .iter()
            .map(|(c, &e)| (c.clone(), self.universe[e].clone()))
            .collect();
        let predicates: BTreeMap<String, Vec<Vec<String>>> = self
            .predicates
            .iter()
            .map(|(p, rel)| {
                let mut tuples: Vec<Vec<String>> = rel
                    .tuples
                    .iter()
                    .map(|t| t.iter().map(|&e| self.universe[e].clone()).collect())
                    .collect();
                tuples.sort();
                (p.clone(), tuples)
            })
            .collect();
        WireModel {
            universe,
            constants,
            predicates,
        }
    }

    /// `{"universe":[…],"constants":{…},"predicates":{…}}` with every array
    /// sorted lexicographically.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.wire()).expect("string maps serialize")
    }
}

impl Serialize for Interpretation {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.wire().serialize(serializer)
    }
}

#[derive(Serialize, Deserialize)]
struct WireModel {
    universe: Vec<String>,
    constants: BTreeMap<String, String>,
    predicates: BTreeMap<String, Vec<Vec<String>>>,
}

/// The extension of `i` to a universe enlarged by `extra`: same denotations
/// for every constant and predicate.
pub fn extend(i: &Interpretation, extra: &[String]) -> Result<Interpretation> {
    let mut out = i.clone();
    for e in extra {
        if out.universe.contains(e) {
            return Err(Error::ElementClash(e.clone()));
        }
        out.universe.push(e.clone());
    }
    Ok(out)
}

/// Classical satisfaction of a sentence. Mirror atoms `p'(t)` are read from
/// `valuation`.
pub fn holds(f: &Formula, i: &Interpretation, valuation: Option<&PredicateValuation>) -> Result<bool> {
    if let Some(v) = f.free_vars().into_iter().next() {
        return Err(Error::FreeVariables(vec![v]));
    }
    let mut env = Vec::new();
    eval(f, i, valuation, &mut env)
}

fn denote(t: &Term, i: &Interpretation, env: &[(String, usize)]) -> Result<usize> {
    match t {
        Term::Const(c) => i
            .constants
            .get(c)
            .copied()
            .ok_or_else(|| Error::UncoveredSymbol(c.clone())),
        Term::Var(v) => env
            .iter()
            .rev()
            .find(|(name, _)| name == v)
            .map(|&(_, e)| e)
            .ok_or_else(|| Error::FreeVariables(vec![v.clone()])),
    }
}

fn eval(
    f: &Formula,
    i: &Interpretation,
    valuation: Option<&PredicateValuation>,
    env: &mut Vec<(String, usize)>,
) -> Result<bool> {
    Ok(match f {
        Formula::Bot => false,
        Formula::Pred { name, args } => {
            let tuple = args
                .iter()
                .map(|t| denote(t, i, env))
                .collect::<Result<Vec<_>>>()?;
            let (base, mirror) = split_mirror(name);
            let rel = i
                .predicates
                .get(base)
                .ok_or_else(|| Error::UncoveredSymbol(base.to_owned()))?;
            if rel.arity != tuple.len() {
                return Err(Error::ArityConflict {
                    predicate: base.to_owned(),
                    first: rel.arity,
                    second: tuple.len(),
                });
            }
            if mirror {
                valuation
                    .and_then(|v| v.get(base))
                    .ok_or_else(|| Error::UncoveredSymbol(name.clone()))?
                    .contains(&tuple)
            } else {
                rel.tuples.contains(&tuple)
            }
        }
        Formula::Eq(l, r) => denote(l, i, env)? == denote(r, i, env)?,
        Formula::And(a, b) => eval(a, i, valuation, env)? && eval(b, i, valuation, env)?,
        Formula::Or(a, b) => eval(a, i, valuation, env)? || eval(b, i, valuation, env)?,
        Formula::Implies(a, b) => !eval(a, i, valuation, env)? || eval(b, i, valuation, env)?,
        Formula::Forall(x, body) | Formula::Exists(x, body) => {
            let universal = matches!(f, Formula::Forall(..));
            let mut result = universal;
            for e in 0..i.universe.len() {
                env.push((x.clone(), e));
                let value = eval(body, i, valuation, env);
                env.pop();
                if value? != universal {
                    result = !universal;
                    break;
                }
            }
            result
        }
    })
}
