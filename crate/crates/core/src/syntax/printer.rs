use std::collections::BTreeSet;

use crate::formula::{Formula, Quantifier, Term};

const IFF: u8 = 0;
const IMPLIES: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const UNARY: u8 = 4;

struct Printer {
    free: BTreeSet<String>,
    scope: Vec<(String, String)>,
    next: usize,
}

impl Printer {
    fn fresh(&mut self) -> String {
        loop {
            self.next += 1;
            let name = format!("X{}", self.next);
            if !self.free.contains(&name) {
                return name;
            }
        }
    }

    fn term(&self, t: &Term) -> String {
        match t {
            Term::Const(c) => c.clone(),
            Term::Var(v) => self
                .scope
                .iter()
                .rev()
                .find(|(orig, _)| orig == v)
                .map_or_else(|| v.clone(), |(_, printed)| printed.clone()),
        }
    }

    fn print(&mut self, f: &Formula, context: u8) -> String {
        let (level, text) = self.render(f);
        if level < context {
            format!("({text})")
        } else {
            text
        }
    }

    fn render(&mut self, f: &Formula) -> (u8, String) {
        if f.is_top() {
            return (UNARY, "true".into());
        }
        if let Some(inner) = f.negated() {
            if let Formula::Eq(l, r) = inner {
                return (UNARY, format!("{} != {}", self.term(l), self.term(r)));
            }
            return (UNARY, format!("not {}", self.print(inner, UNARY)));
        }
        match f {
            Formula::Bot => (UNARY, "false".into()),
            Formula::Pred { name, args } if args.is_empty() => (UNARY, name.clone()),
            Formula::Pred { name, args } => {
                let args: Vec<String> = args.iter().map(|t| self.term(t)).collect();
                (UNARY, format!("{name}({})", args.join(", ")))
            }
            Formula::Eq(l, r) => (UNARY, format!("{} = {}", self.term(l), self.term(r))),
            Formula::And(a, b) => {
                if let (Formula::Implies(l1, r1), Formula::Implies(l2, r2)) = (&**a, &**b) {
                    if l1 == r2 && r1 == l2 {
                        let left = self.print(l1, IFF);
                        let right = self.print(r1, IMPLIES);
                        return (IFF, format!("{left} <-> {right}"));
                    }
                }
                let left = self.print(a, AND);
                let right = self.print(b, UNARY);
                (AND, format!("{left} & {right}"))
            }
            Formula::Or(a, b) => {
                let left = self.print(a, OR);
                let right = self.print(b, AND);
                (OR, format!("{left} | {right}"))
            }
            Formula::Implies(a, b) => {
                let left = self.print(a, OR);
                let right = self.print(b, IMPLIES);
                (IMPLIES, format!("{left} -> {right}"))
            }
            Formula::Forall(..) | Formula::Exists(..) => {
                let q = match f {
                    Formula::Forall(..) => Quantifier::Forall,
                    _ => Quantifier::Exists,
                };
                let mut names = Vec::new();
                let mut body = f;
                loop {
                    match (q, body) {
                        (Quantifier::Forall, Formula::Forall(x, inner))
                        | (Quantifier::Exists, Formula::Exists(x, inner)) => {
                            let printed = self.fresh();
                            self.scope.push((x.clone(), printed.clone()));
                            names.push(printed);
                            body = inner;
                        }
                        _ => break,
                    }
                }
                let inner = self.print(body, IFF);
                self.scope.truncate(self.scope.len() - names.len());
                (UNARY, format!("{q} {} ({inner})", names.join(" ")))
            }
        }
    }
}

/// Renders a formula with the fewest parentheses the grammar allows. Bound
/// variables are renamed `X1, X2, …` in binder order; `¬`, `⊤`, `↔` and `≠`
/// are written with their sugared spellings.
pub fn print(f: &Formula) -> String {
    let mut printer = Printer {
        free: f.free_vars(),
        scope: Vec::new(),
        next: 0,
    };
    printer.print(f, IFF)
}
