//! Text syntax for formulas and JSON output for model sets.

mod parser;
mod printer;

pub use parser::{parse, parse_formula};
pub use printer::print;

use crate::sm::Interpretation;

/// A JSON array of models, sorted by their JSON rendering, so the output
/// does not depend on the order of `models`.
pub fn serialize_models(models: &[Interpretation]) -> String {
    let mut items: Vec<String> = models.iter().map(Interpretation::to_json).collect();
    items.sort();
    format!("[{}]", items.join(","))
}
