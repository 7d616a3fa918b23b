//! `smsafe`: safety analysis, grounding and stable models of first-order
//! sentences.
//!
//! Exit status: 0 on success, 1 when a verification suite fails, 2 on usage
//! or input errors, 3 when the enumeration budget is exceeded.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use smsafe::harness::{self, Corpus, Suite, VerifyOptions};
use smsafe::sm::characterize::characterize_with;
use smsafe::sm::ConstMaps;
use smsafe::{
    ground, parse, print, serialize_models, signature_of, simplify, stable_models, to_prenex, Budget, ConstantSet,
    Error, GroundOptions, Interpretation, Scope,
};

#[derive(Parser)]
#[command(name = "smsafe", version, about = "Stable models of safe first-order sentences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Maximum number of candidates an enumeration may visit. Overrides
    /// SMSAFE_BUDGET.
    #[arg(long, global = true, value_name = "N")]
    budget: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a sentence and print it in canonical form.
    Parse {
        formula: String,
        #[command(flatten)]
        common: Common,
    },
    /// Print the prenex form of a sentence.
    Prenex {
        formula: String,
        #[command(flatten)]
        common: Common,
    },
    /// Classify a sentence as safe, semi-safe only, or unsafe.
    Safety {
        formula: String,
        #[command(flatten)]
        common: Common,
    },
    /// Replace the quantifiers of the prenex form by finite conjunctions and
    /// disjunctions over a set of constants.
    Ground {
        formula: String,
        /// Comma-separated constant set; defaults to the constants of the
        /// sentence.
        #[arg(long, value_delimiter = ',')]
        constants: Option<Vec<String>>,
        #[arg(long)]
        simplify: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Enumerate stable models.
    Sm {
        formula: String,
        /// Herbrand interpretations (the default when no universe is given).
        #[arg(long, conflicts_with = "universe")]
        herbrand: bool,
        /// Interpretations over the universe {e1, ..., eN}.
        #[arg(long, value_name = "N")]
        universe: Option<usize>,
        /// With --universe, range over every map from constants to elements
        /// instead of one injective map.
        #[arg(long, requires = "universe")]
        all_const_maps: bool,
        /// Comma-separated constants added to the signature.
        #[arg(long, value_delimiter = ',')]
        constants: Option<Vec<String>>,
        #[command(flatten)]
        common: Common,
    },
    /// Print a variable-free G with SM[F] equivalent to G & SPP(F) for a safe F.
    Characterize {
        formula: String,
        #[command(flatten)]
        common: Common,
    },
    /// Run a verification suite over a corpus.
    Verify {
        /// One of prop1..prop5, lemma1..lemma3, negsplit, counterexamples.
        suite: String,
        /// Corpus file; defaults to the shipped corpus.
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// Largest universe size checked.
        #[arg(long, value_name = "N", default_value_t = 3)]
        universe: usize,
        /// Skip entries with more object constants than this.
        #[arg(long, value_name = "N")]
        max_constants: Option<usize>,
        /// Run on every entry regardless of its declared verdict.
        #[arg(long)]
        force: bool,
        #[command(flatten)]
        common: Common,
    },
}

enum Failure {
    Usage(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Budget { .. } => Failure::Budget(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn budget(common: &Common) -> Budget {
    common.budget.map(Budget::new).unwrap_or_else(Budget::from_env)
}

fn model_line(i: &Interpretation) -> String {
    let atoms: Vec<String> = i.atoms().iter().map(ToString::to_string).collect();
    let herbrand = i.constants.len() == i.universe.len() && i.constants.iter().all(|(c, &e)| i.universe[e] == *c);
    if herbrand {
        return format!("{{{}}}", atoms.join(", "));
    }
    let constants: Vec<String> = i.constants.iter().map(|(c, &e)| format!("{c}={}", i.universe[e])).collect();
    format!(
        "universe {{{}}} constants {{{}}} atoms {{{}}}",
        i.universe.join(", "),
        constants.join(", "),
        atoms.join(", ")
    )
}

fn run(command: Command) -> Result<bool, Failure> {
    match command {
        Command::Parse { formula, common } => {
            let f = parse(&formula)?;
            let sig = signature_of(&f)?;
            if common.json {
                let out = json!({"formula": print(&f), "constants": sig.constants, "predicates": sig.predicates});
                println!("{out}");
            } else {
                println!("{}", print(&f));
            }
        }
        Command::Prenex { formula, common } => {
            let s = to_prenex(&parse(&formula)?)?;
            if common.json {
                let prefix: Vec<_> = s.prefix.iter().map(|(q, x)| json!([q.to_string(), x])).collect();
                let out = json!({"prefix": prefix, "matrix": print(&s.matrix), "formula": s.to_string()});
                println!("{out}");
            } else {
                println!("{s}");
            }
        }
        Command::Safety { formula, common } => {
            let report = smsafe::is_safe(&to_prenex(&parse(&formula)?)?);
            if common.json {
                println!("{}", report.to_json());
            } else {
                println!("verdict {}", report.verdict);
                for (x, evidence) in &report.per_variable {
                    for occurrence in &evidence.occurrences {
                        let status = match (&occurrence.witness, occurrence.semi_safe()) {
                            (_, false) => "not semi-safe".to_owned(),
                            (Some(w), true) => format!("restricted by {}", w.subformula),
                            (None, true) => "semi-safe, not weakly restricted".to_owned(),
                        };
                        println!("  {} {x} at {}: {status}", evidence.quantifier, occurrence.path);
                    }
                }
                for warning in &report.warnings {
                    println!("warning: {warning}");
                }
            }
        }
        Command::Ground {
            formula,
            constants,
            simplify: simp,
            common,
        } => {
            let s = to_prenex(&parse(&formula)?)?;
            let c = match constants {
                Some(list) => ConstantSet::new(list.into_iter().map(|k| k.trim().to_owned())),
                None => ConstantSet::from(s.constants()),
            };
            let options = GroundOptions {
                simplify: simp,
                ..GroundOptions::default()
            };
            let g = print(&ground(&s, &c, options)?);
            if common.json {
                println!("{}", json!({"constants": c.as_set(), "formula": g}));
            } else {
                println!("{g}");
            }
        }
        Command::Sm {
            formula,
            herbrand: _,
            universe,
            all_const_maps,
            constants,
            common,
        } => {
            let f = parse(&formula)?;
            let extra_constants: BTreeSet<String> = constants.unwrap_or_default().into_iter().collect();
            let scope = match universe {
                None => Scope::Herbrand { extra_constants },
                Some(size) => Scope::Universe {
                    size,
                    const_maps: if all_const_maps { ConstMaps::All } else { ConstMaps::Distinct },
                    extra_constants,
                    dedupe: false,
                },
            };
            let models = stable_models(&f, &scope, budget(&common))?;
            if common.json {
                println!("{}", serialize_models(&models));
            } else {
                println!("{} stable model{}", models.len(), if models.len() == 1 { "" } else { "s" });
                for m in &models {
                    println!("{}", model_line(m));
                }
            }
        }
        Command::Characterize { formula, common } => {
            let s = to_prenex(&parse(&formula)?)?;
            let ch = characterize_with(&s, budget(&common))?;
            if common.json {
                let out = json!({"case": ch.case, "g": print(&ch.g), "spp": print(&ch.spp)});
                println!("{out}");
            } else {
                println!("{}", print(&simplify(&ch.g)));
                println!("SPP: {}", print(&ch.spp));
            }
        }
        Command::Verify {
            suite,
            corpus,
            universe,
            max_constants,
            force,
            common,
        } => {
            let suite: Suite = suite.parse()?;
            let corpus = match corpus {
                Some(path) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                    Corpus::parse(&text)?
                }
                None => Corpus::shipped(),
            };
            let options = VerifyOptions {
                max_universe: universe,
                max_constants,
                budget: budget(&common),
                force,
            };
            let report = harness::verify(suite, &corpus, &options)?;
            if common.json {
                println!("{}", report.to_json());
            } else {
                println!("{}", report.summary());
                for skip in &report.skipped {
                    println!("  skipped {}: {}", skip.entry, skip.reason);
                }
                for note in &report.notes {
                    println!("  note: {note}");
                }
                if let Some(cx) = &report.counterexample {
                    println!("  counterexample in {}: {}", cx.entry, cx.detail);
                    println!("  formula: {}", cx.formula);
                    println!("  interpretation: {}", cx.interpretation.to_json());
                }
            }
            return Ok(report.passed());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(3)
        }
    }
}
