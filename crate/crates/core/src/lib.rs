//! Stable models of first-order sentences: safety analysis, grounding, the
//! `SM` operator over finite interpretations, and the variable-free
//! characterization of stable models of safe sentences.

pub mod error;
pub mod formula;
pub mod grounder;
pub mod harness;
pub mod prenex;
pub mod safety;
pub mod sm;
pub mod syntax;

pub use error::{Error, Result};
pub use formula::{signature_of, Formula, Quantifier, Signature, Term};
pub use grounder::{ground, ConstantSet, GroundOptions};
pub use prenex::{simplify, to_prenex, PrenexSentence};
pub use safety::{is_safe, SafetyReport, Verdict};
pub use sm::{is_stable, stable_models, Budget, Interpretation, Scope};
pub use syntax::{parse, parse_formula, print, serialize_models};
