//! Corpus files: one entry per line, `name<TAB>verdict<TAB>formula`.
//! Blank lines and lines starting with `#` are ignored.

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::prenex::{to_prenex, PrenexSentence};
use crate::safety::{is_safe, Verdict};
use crate::syntax::parse;

/// The corpus shipped with the crate.
pub const SHIPPED: &str = include_str!("../../../../corpus/shipped.cor");

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: String,
    pub verdict: Verdict,
    pub text: String,
    pub formula: Formula,
    pub prenex: PrenexSentence,
    pub line: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Corpus {
    pub entries: Vec<CorpusEntry>,
}

impl Corpus {
    /// Parses a corpus and checks every declared verdict against the safety
    /// analysis.
    pub fn parse(text: &str) -> Result<Corpus> {
        let mut entries: Vec<CorpusEntry> = Vec::new();
        for (index, raw) in text.lines().enumerate() {
            let line = index + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let err = |message: String| Error::Corpus { line, message };
            let fields: Vec<&str> = raw.splitn(3, '\t').collect();
            let [name, verdict, formula_text] = fields[..] else {
                return Err(err("expected name, verdict and formula separated by tabs".into()));
            };
            let name = name.trim();
            if entries.iter().any(|e| e.name == name) {
                return Err(err(format!("duplicate entry name {name}")));
            }
            let verdict = Verdict::parse(verdict.trim())
                .ok_or_else(|| err(format!("unknown verdict {:?}", verdict.trim())))?;
            let formula = parse(formula_text).map_err(|e| err(format!("{name}: {e}")))?;
            let prenex = to_prenex(&formula).map_err(|e| err(format!("{name}: {e}")))?;
            let found = is_safe(&prenex).verdict;
            if found != verdict {
                return Err(err(format!("{name}: declared {verdict}, analysis says {found}")));
            }
            entries.push(CorpusEntry {
                name: name.to_owned(),
                verdict,
                text: formula_text.trim().to_owned(),
                formula,
                prenex,
                line,
            });
        }
        Ok(Corpus { entries })
    }

    pub fn shipped() -> Corpus {
        Corpus::parse(SHIPPED).expect("shipped corpus is well-formed")
    }

    pub fn get(&self, name: &str) -> Option<&CorpusEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn with_verdict(&self, verdict: Verdict) -> impl Iterator<Item = &CorpusEntry> {
        self.entries.iter().filter(move |e| e.verdict == verdict)
    }
}
