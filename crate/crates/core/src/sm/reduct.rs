//! Stable models of variable-free formulas via the reduct.
//!
//! `X` is stable for `G` iff `X ⊨ G` and no proper subset of `X` satisfies
//! `G^X`, the formula obtained by replacing every maximal subformula that `X`
//! does not satisfy with `⊥`. Constants are read as pairwise distinct.
//! This shares no code with the second-order enumeration in [`super`].

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::formula::{Formula, Term};
use crate::sm::engine::Budget;
use crate::sm::interpretation::GroundAtom;

#[derive(Clone, Debug)]
enum Ground {
    False,
    True,
    Atom(usize),
    And(Box<Ground>, Box<Ground>),
    Or(Box<Ground>, Box<Ground>),
    Implies(Box<Ground>, Box<Ground>),
}

fn lower(f: &Formula, atoms: &mut Vec<GroundAtom>) -> Result<Ground> {
    let constant = |t: &Term| match t {
        Term::Const(c) => Ok(c.clone()),
        Term::Var(_) => Err(Error::NotGround),
    };
    Ok(match f {
        Formula::Bot => Ground::False,
        Formula::Pred { name, args } => {
            let atom = GroundAtom {
                predicate: name.clone(),
                args: args.iter().map(constant).collect::<Result<_>>()?,
            };
            let index = match atoms.iter().position(|a| *a == atom) {
                Some(i) => i,
                None => {
                    atoms.push(atom);
                    atoms.len() - 1
                }
            };
            Ground::Atom(index)
        }
        Formula::Eq(l, r) => {
            if constant(l)? == constant(r)? {
                Ground::True
            } else {
                Ground::False
            }
        }
        Formula::And(a, b) => Ground::And(Box::new(lower(a, atoms)?), Box::new(lower(b, atoms)?)),
        Formula::Or(a, b) => Ground::Or(Box::new(lower(a, atoms)?), Box::new(lower(b, atoms)?)),
        Formula::Implies(a, b) => Ground::Implies(Box::new(lower(a, atoms)?), Box::new(lower(b, atoms)?)),
        Formula::Forall(..) | Formula::Exists(..) => return Err(Error::NotGround),
    })
}

fn sat(g: &Ground, x: u64) -> bool {
    match g {
        Ground::False => false,
        Ground::True => true,
        Ground::Atom(i) => x >> i & 1 == 1,
        Ground::And(a, b) => sat(a, x) && sat(b, x),
        Ground::Or(a, b) => sat(a, x) || sat(b, x),
        Ground::Implies(a, b) => !sat(a, x) || sat(b, x),
    }
}

fn reduct(g: &Ground, x: u64) -> Ground {
    if !sat(g, x) {
        return Ground::False;
    }
    match g {
        Ground::False | Ground::True | Ground::Atom(_) => g.clone(),
        Ground::And(a, b) => Ground::And(Box::new(reduct(a, x)), Box::new(reduct(b, x))),
        Ground::Or(a, b) => Ground::Or(Box::new(reduct(a, x)), Box::new(reduct(b, x))),
        Ground::Implies(a, b) => Ground::Implies(Box::new(reduct(a, x)), Box::new(reduct(b, x))),
    }
}

/// Stable models of a variable-free formula as sets of ground atoms, sorted.
pub fn reduct_stable_models(g: &Formula) -> Result<Vec<BTreeSet<GroundAtom>>> {
    reduct_stable_models_with(g, Budget::default())
}

pub fn reduct_stable_models_with(g: &Formula, budget: Budget) -> Result<Vec<BTreeSet<GroundAtom>>> {
    let mut atoms = Vec::new();
    let ground = lower(g, &mut atoms)?;
    let n = atoms.len();
    if n >= 64 {
        return Err(Error::Budget {
            what: "ground atoms".into(),
            needed: 1u128 << n.min(127),
            limit: budget.max_candidates,
        });
    }
    budget.check("candidate atom sets", 1u128 << n)?;
    let mut out: Vec<BTreeSet<GroundAtom>> = Vec::new();
    for x in 0..1u64 << n {
        if !sat(&ground, x) {
            continue;
        }
        let r = reduct(&ground, x);
        // proper subsets of x
        let mut y = x;
        let mut stable = true;
        while y != 0 {
            y = (y - 1) & x;
            if sat(&r, y) {
                stable = false;
                break;
            }
        }
        if stable {
            out.push((0..n).filter(|i| x >> i & 1 == 1).map(|i| atoms[i].clone()).collect());
        }
    }
    out.sort();
    Ok(out)
}
