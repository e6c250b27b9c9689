//! The `motzeta` command-line tool.
//!
//! [`run`] executes one [`RunConfig`] and returns the exit code together with
//! everything destined for stdout and stderr, so the binary and the tests
//! share one code path. Exit codes: 0 success, 1 validation or computation
//! failure, 2 parse or input error.

pub mod input;
pub mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use motzeta::abelian::{parse_abelian, validate_oracle_table, AbelianInput};
use motzeta::monodromy::check_monodromy_property;
use motzeta::rational::{self, Rational};
use motzeta::sncmodel::{parse_model, ModelError, ModelParseError, SncModel};
use rayon::prelude::*;
use serde::Serialize;

use input::{InputError, Source};
use report::{
    check_mp_text, poles_text, AbelianReport, MonodromyReport, SeriesReport, SkeletonReport, TopologyReport,
    ValidateReport, ZetaReport,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_PARSE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    Zeta,
    Series { depth: usize },
    Poles { q: Option<Rational> },
    Skeleton,
    Topology,
    Monodromy,
    CheckMp,
    Blowup { piece: String },
    Abelian { depth: Option<u64> },
    Validate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    /// Files, directories or bundled corpus names.
    pub inputs: Vec<String>,
    pub command: Command,
    pub format: Format,
    /// Parameter bound to generator stubs and to the symbol `n` in classes.
    pub n: Option<u32>,
    /// Frame every report with its input label, even for a single input.
    pub batch: bool,
    /// Directory searched for `<name>.json` before the bundled corpus.
    pub corpus_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(command: Command, inputs: impl IntoIterator<Item = impl Into<String>>) -> Self {
        Self {
            inputs: inputs.into_iter().map(Into::into).collect(),
            command,
            format: Format::Text,
            n: None,
            batch: false,
            corpus_dir: None,
        }
    }

    pub fn json(mut self) -> Self {
        self.format = Format::Json;
        self
    }

    pub fn with_n(mut self, n: u32) -> Self {
        self.n = Some(n);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Result of one input: a report or a failure message.
struct Item {
    label: String,
    code: i32,
    json: Option<String>,
    text: String,
    errors: Vec<String>,
}

impl Item {
    fn report<R: Serialize>(label: &str, code: i32, report: &R, text: String) -> Self {
        Self {
            label: label.to_string(),
            code,
            json: Some(serde_json::to_string(report).expect("reports serialize")),
            text,
            errors: vec![],
        }
    }

    fn failure(label: &str, code: i32, errors: Vec<String>) -> Self {
        Self {
            label: label.to_string(),
            code,
            json: None,
            text: String::new(),
            errors,
        }
    }
}

fn parse_failure(label: &str, e: &ModelParseError) -> Item {
    let msg = match e {
        ModelParseError::Json { line, column, message } => format!("{label}:{line}:{column}: {message}"),
        other => format!("{label}: {other}"),
    };
    Item::failure(label, EXIT_PARSE, vec![msg])
}

fn model_failure(label: &str, e: &ModelError) -> Item {
    let errors = match e {
        ModelError::Invalid(diags) => diags.iter().map(|d| format!("{label}: {d}")).collect(),
        other => vec![format!("{label}: {other}")],
    };
    Item::failure(label, EXIT_INVALID, errors)
}

fn abelian_input(src: &Source, n: Option<u32>) -> Result<AbelianInput, Item> {
    parse_abelian(&src.text, n).map_err(|e| {
        let msg = match &e {
            motzeta::abelian::AbelianParseError::Json { line, column, message } => {
                format!("{}:{line}:{column}: {message}", src.label)
            }
            other => format!("{}: {other}", src.label),
        };
        Item::failure(&src.label, EXIT_PARSE, vec![msg])
    })
}

fn is_abelian_json(text: &str) -> bool {
    serde_json::from_str::<serde_json::Value>(text)
        .ok()
        .is_some_and(|v| v.get("mode").is_some())
}

fn validate(src: &Source, n: Option<u32>) -> Item {
    if is_abelian_json(&src.text) {
        let inp = match abelian_input(src, n) {
            Ok(i) => i,
            Err(item) => return item,
        };
        let diagnostics: Vec<String> = match &inp {
            AbelianInput::SemiAbelian(_) => vec![],
            AbelianInput::Table(t) => validate_oracle_table(t).iter().map(ToString::to_string).collect(),
        };
        let r = ValidateReport {
            input: src.label.clone(),
            kind: "abelian".into(),
            valid: diagnostics.is_empty(),
            diagnostics,
        };
        let code = if r.valid { EXIT_OK } else { EXIT_INVALID };
        let text = r.text();
        return Item::report(&src.label, code, &r, text);
    }
    let model = match parse_model(&src.text, n) {
        Ok(m) => m,
        Err(e) => return parse_failure(&src.label, &e),
    };
    let mut diagnostics: Vec<String> = model.validate().iter().map(ToString::to_string).collect();
    if diagnostics.is_empty() {
        if let Err(e) = model.euler_open_strata() {
            diagnostics.push(e.to_string());
        }
    }
    let r = ValidateReport {
        input: src.label.clone(),
        kind: "model".into(),
        valid: diagnostics.is_empty(),
        diagnostics,
    };
    let code = if r.valid { EXIT_OK } else { EXIT_INVALID };
    let text = r.text();
    Item::report(&src.label, code, &r, text)
}

fn with_model(src: &Source, n: Option<u32>, f: impl FnOnce(&SncModel) -> Result<Item, Item>) -> Item {
    let model = match parse_model(&src.text, n) {
        Ok(m) => m,
        Err(e) => return parse_failure(&src.label, &e),
    };
    let diags = model.validate();
    if !diags.is_empty() {
        return model_failure(&src.label, &ModelError::Invalid(diags));
    }
    f(&model).unwrap_or_else(|e| e)
}

fn process(src: &Source, cfg: &RunConfig) -> Item {
    let label = src.label.as_str();
    let n = cfg.n;
    let model_err = |e: ModelError| model_failure(label, &e);
    let other_err = |e: String| Item::failure(label, EXIT_INVALID, vec![format!("{label}: {e}")]);
    match &cfg.command {
        Command::Validate => validate(src, n),
        Command::Abelian { depth } => {
            let inp = match abelian_input(src, n) {
                Ok(i) => i,
                Err(item) => return item,
            };
            match AbelianReport::new(&inp, *depth) {
                Ok(r) => {
                    let code = if r.valid { EXIT_OK } else { EXIT_INVALID };
                    let mut item = Item::report(label, code, &r, r.text());
                    item.errors = r
                        .diagnostics
                        .iter()
                        .map(|d| format!("{label}: table violates {}", d.message))
                        .collect();
                    item
                }
                Err(e) => other_err(e),
            }
        }
        Command::Zeta => with_model(src, n, |m| {
            let r = ZetaReport::new(m).map_err(model_err)?;
            Ok(Item::report(label, EXIT_OK, &r, r.text()))
        }),
        Command::Series { depth } => with_model(src, n, |m| {
            let r = SeriesReport::new(m, *depth).map_err(model_err)?;
            Ok(Item::report(label, EXIT_OK, &r, r.text()))
        }),
        Command::Poles { q } => with_model(src, n, |m| {
            let r = report::poles(m, q.as_ref()).map_err(model_err)?;
            Ok(Item::report(label, EXIT_OK, &r, poles_text(&r)))
        }),
        Command::Skeleton => with_model(src, n, |m| {
            let r = SkeletonReport::new(m).map_err(model_err)?;
            Ok(Item::report(label, EXIT_OK, &r, r.text()))
        }),
        Command::Topology => with_model(src, n, |m| {
            let r = TopologyReport::new(m).map_err(model_err)?;
            Ok(Item::report(label, EXIT_OK, &r, r.text()))
        }),
        Command::Monodromy => with_model(src, n, |m| {
            let r = MonodromyReport::new(m).map_err(other_err)?;
            Ok(Item::report(label, EXIT_OK, &r, r.text()))
        }),
        Command::CheckMp => with_model(src, n, |m| {
            let r = check_monodromy_property(m).map_err(model_err)?;
            Ok(Item::report(label, EXIT_OK, &r, check_mp_text(&m.name, &r)))
        }),
        Command::Blowup { piece } => with_model(src, n, |m| {
            let b = m.blowup_stratum(piece).map_err(model_err)?;
            Ok(Item::report(label, EXIT_OK, &b, format!("{}\n", b.to_json())))
        }),
    }
}

/// One line of batch JSON output: `{"input":..,"exit":..,"report":..,"errors":[..]}`
/// with `report` and `errors` omitted when absent or empty.
fn batch_line(item: &Item) -> String {
    let mut line = format!(
        "{{\"input\":{},\"exit\":{}",
        serde_json::to_string(&item.label).expect("strings serialize"),
        item.code
    );
    if let Some(j) = &item.json {
        line.push_str(",\"report\":");
        line.push_str(j);
    }
    if !item.errors.is_empty() {
        line.push_str(",\"errors\":");
        line.push_str(&serde_json::to_string(&item.errors).expect("strings serialize"));
    }
    line.push('}');
    line
}

/// Runs the configured subcommand over every input. Inputs are evaluated in
/// parallel; output keeps input order.
pub fn run(cfg: &RunConfig) -> Outcome {
    let resolved: Vec<Result<Source, InputError>> = cfg
        .inputs
        .iter()
        .flat_map(|a| input::resolve(a, cfg.corpus_dir.as_deref()))
        .collect();
    let batch = cfg.batch || resolved.len() != 1 || cfg.inputs.iter().any(|a| std::path::Path::new(a).is_dir());
    let items: Vec<Item> = resolved
        .par_iter()
        .map(|r| match r {
            Ok(src) => process(src, cfg),
            Err(e) => Item::failure(&e.label, EXIT_PARSE, vec![format!("{}: {}", e.label, e.message)]),
        })
        .collect();

    let mut out = Outcome::default();
    if items.is_empty() {
        out.code = EXIT_PARSE;
        out.stderr.push_str("no inputs\n");
        return out;
    }
    for item in &items {
        out.code = out.code.max(item.code);
        for e in &item.errors {
            out.stderr.push_str(e);
            out.stderr.push('\n');
        }
        match (cfg.format, batch) {
            (Format::Json, false) => {
                if let Some(j) = &item.json {
                    out.stdout.push_str(j);
                    out.stdout.push('\n');
                }
            }
            (Format::Json, true) => {
                out.stdout.push_str(&batch_line(item));
                out.stdout.push('\n');
            }
            (Format::Text, false) => out.stdout.push_str(&item.text),
            (Format::Text, true) => {
                out.stdout.push_str(&format!("== {} ==\n", item.label));
                if item.json.is_some() {
                    out.stdout.push_str(&item.text);
                } else {
                    out.stdout.push_str("error\n");
                }
            }
        }
    }
    out
}

fn parse_q(s: &str) -> Result<Rational, String> {
    rational::parse_reduced(s).map_err(|e| format!("{e}; expected a reduced fraction such as -1/2"))
}

#[derive(Debug, Args)]
pub struct Inputs {
    /// Model files, directories of `*.json` files, or bundled corpus names.
    #[arg(required = true)]
    pub inputs: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Normal form of the zeta function.
    Zeta(Inputs),
    /// Power-series coefficients of T^1 .. T^D.
    Series {
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
        depth: u32,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Candidate poles with certified orders.
    Poles {
        /// Report only this pole (reduced fraction).
        #[arg(long, value_parser = parse_q, allow_hyphen_values = true)]
        q: Option<Rational>,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Essential skeleton: faces, degeneracy index, min(omega), weights.
    Skeleton(Inputs),
    /// Homology of the dual complex and skeleton; pseudo-manifold check.
    Topology(Inputs),
    /// Monodromy zeta function and cyclotomic exponents.
    Monodromy(Inputs),
    /// Monodromy Property report.
    CheckMp(Inputs),
    /// Blow up the closure of a stratum piece and print the new model.
    Blowup {
        #[arg(long)]
        piece: String,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Semi-abelian closed forms and oracle tables.
    Abelian {
        /// Number of series coefficients (default: 10, or every leading table row).
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        depth: Option<u64>,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Validate model or abelian input files.
    Validate(Inputs),
}

#[derive(Debug, Parser)]
#[command(name = "motzeta", version, about = "Exact motivic zeta functions of snc-degenerations")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Parameter for generator stubs such as kodaira_In, and for `n` in classes.
    #[arg(long, global = true)]
    pub n: Option<u32>,
    /// Label every report with its input, even for a single input.
    #[arg(long, global = true)]
    pub batch: bool,
    #[command(subcommand)]
    pub command: Cmd,
}

impl Cli {
    /// The run configuration; `corpus_dir` comes from the environment.
    pub fn into_config(self, corpus_dir: Option<PathBuf>) -> RunConfig {
        let (command, inputs) = match self.command {
            Cmd::Zeta(i) => (Command::Zeta, i),
            Cmd::Series { depth, inputs } => (Command::Series { depth: depth as usize }, inputs),
            Cmd::Poles { q, inputs } => (Command::Poles { q }, inputs),
            Cmd::Skeleton(i) => (Command::Skeleton, i),
            Cmd::Topology(i) => (Command::Topology, i),
            Cmd::Monodromy(i) => (Command::Monodromy, i),
            Cmd::CheckMp(i) => (Command::CheckMp, i),
            Cmd::Blowup { piece, inputs } => (Command::Blowup { piece }, inputs),
            Cmd::Abelian { depth, inputs } => (Command::Abelian { depth }, inputs),
            Cmd::Validate(i) => (Command::Validate, i),
        };
        RunConfig {
            inputs: inputs.inputs,
            command,
            format: self.format,
            n: self.n,
            batch: self.batch,
            corpus_dir,
        }
    }
}
