//! The `isci` command line.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use isci_core::countermodel::validate_refutation;
use isci_core::semantics::{bounded_countermodel_search, DEFAULT_ORACLE_WORLDS};
use isci_core::{
    check_proof, countermodel, decide, parse_formula, prove, CounterModelError, Decision, Formula,
    Goal, KripkeModel, Limits, SearchError, Sequent, Verdict, World,
};
use serde::{Deserialize, Serialize};

use crate::export::{
    bundle_doc, import_formula, import_model, import_proof, model_doc, proof_doc, to_json,
    ModelDoc, OracleDoc, ProofDoc, Status, VerdictDoc,
};
use crate::render;

pub const EXIT_PROVED: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

/// Checked artifacts reuse the verdict codes: accepted 0, rejected 1.
pub const EXIT_ACCEPTED: i32 = 0;
pub const EXIT_REJECTED: i32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
    Graph,
    Latex,
}

#[derive(Debug, Parser)]
#[command(name = "isci", version, about = "Decision procedure for intuitionistic logic with identity")]
pub struct Cli {
    #[command(flatten)]
    pub options: Options,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Options {
    /// Output format.
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: Format,
    /// Cap on prover node expansions.
    #[arg(long, default_value_t = isci_core::prover::DEFAULT_MAX_NODES, global = true,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub max_nodes: u64,
    /// Wall-clock limit in seconds.
    #[arg(long, default_value_t = 30.0, global = true, value_parser = positive_seconds)]
    pub timeout: f64,
    /// Cross-check `decide` with the bounded model search over up to k worlds.
    #[arg(long, value_name = "K", num_args = 0..=1, require_equals = true,
          default_missing_value = DEFAULT_ORACLE_WORLDS_STR, global = true,
          value_parser = clap::value_parser!(u64).range(1..=6))]
    pub oracle: Option<u64>,
    /// Print only the verdict line.
    #[arg(long, short, global = true)]
    pub quiet: bool,
}

const DEFAULT_ORACLE_WORLDS_STR: &str = "4";
const _: () = assert!(DEFAULT_ORACLE_WORLDS == 4);

fn positive_seconds(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("`{s}` is not a positive number of seconds")),
    }
}

#[derive(Debug, Args)]
pub struct FormulaInput {
    /// Formula text, or `-` for standard input.
    #[arg(required_unless_present = "file", conflicts_with = "file")]
    pub formula: Option<String>,
    /// Read the formula from a file.
    #[arg(long, short)]
    pub file: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Search for a proof; no countermodel on failure.
    Prove(FormulaInput),
    /// Prove, or refute with a validated countermodel.
    Decide(FormulaInput),
    /// Build a countermodel.
    Countermodel(FormulaInput),
    /// Check a proof document (path or `-`).
    CheckProof { input: String },
    /// Check a countermodel document (path or `-`).
    CheckModel {
        input: String,
        /// Refuted formula, for model documents that do not carry one.
        #[arg(long)]
        formula: Option<String>,
    },
    /// List the extended subformulas with their complexities.
    Exsub(FormulaInput),
}

/// Failure with its exit code; the message goes to the error stream.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<SearchError> for Failure {
    fn from(e: SearchError) -> Self {
        let code = if e.is_resource() { EXIT_RESOURCE } else { EXIT_INTERNAL };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<CounterModelError> for Failure {
    fn from(e: CounterModelError) -> Self {
        let code = if e.is_resource() { EXIT_RESOURCE } else { EXIT_INTERNAL };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    out: &'a mut dyn Write,
}

impl Io<'_> {
    fn read_source(&mut self, input: &str) -> Result<String, Failure> {
        if input == "-" {
            let mut s = String::new();
            self.stdin
                .read_to_string(&mut s)
                .map_err(|e| Failure::input(format!("reading standard input: {e}")))?;
            Ok(s)
        } else {
            std::fs::read_to_string(input).map_err(|e| Failure::input(format!("{input}: {e}")))
        }
    }

    fn formula(&mut self, input: &FormulaInput) -> Result<Formula, Failure> {
        let text = match (&input.formula, &input.file) {
            (_, Some(path)) => self.read_source(path)?,
            (Some(t), None) if t == "-" => self.read_source("-")?,
            (Some(t), None) => t.clone(),
            (None, None) => return Err(Failure::input("no formula given")),
        };
        parse_formula(text.trim()).map_err(|e| Failure::input(format!("syntax error at {e}")))
    }

    fn emit(&mut self, s: &str) {
        let _ = self.out.write_all(s.as_bytes());
    }
}

/// Parses `args` (including the program name) and runs one command.
/// Returns the exit status.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
            } else {
                let _ = out.write_all(text.as_bytes());
            }
            return code;
        }
    };
    let mut io = Io { stdin, out };
    match execute(&cli, &mut io) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "isci: {}", f.message);
            f.code
        }
    }
}

fn execute(cli: &Cli, io: &mut Io<'_>) -> Result<i32, Failure> {
    let opts = &cli.options;
    let deadline = Instant::now() + Duration::from_secs_f64(opts.timeout);
    let stop = move || Instant::now() >= deadline;
    let limits = Limits {
        max_nodes: Some(opts.max_nodes),
        interrupt: Some(&stop),
        instrument: false,
    };
    match &cli.command {
        Command::Prove(input) => {
            let f = io.formula(input)?;
            let outcome = prove(&f, &limits)?;
            let (code, proof) = match &outcome.verdict {
                Verdict::Proved(d) => (EXIT_PROVED, Some(d)),
                Verdict::NotProved => (EXIT_REFUTED, None),
            };
            io.emit(&render_verdict(opts, &f, proof, None, None));
            Ok(code)
        }
        Command::Decide(input) => {
            let f = io.formula(input)?;
            let decision = decide(&f, &limits)?;
            let oracle = opts.oracle.map(|k| {
                let found = bounded_countermodel_search(&f, k as usize).hit.is_some();
                OracleDoc {
                    max_worlds: k as usize,
                    countermodel_found: found,
                    agrees: !(decision.is_proved() && found),
                }
            });
            let (code, text) = match &decision {
                Decision::Proved { proof, .. } => (
                    EXIT_PROVED,
                    render_verdict(opts, &f, Some(proof), None, oracle.as_ref()),
                ),
                Decision::Refuted { bundle, .. } => (
                    EXIT_REFUTED,
                    render_verdict(
                        opts,
                        &f,
                        None,
                        Some((&bundle.model, bundle.designated)),
                        oracle.as_ref(),
                    ),
                ),
            };
            io.emit(&text);
            match oracle {
                Some(o) if !o.agrees => Err(Failure {
                    code: EXIT_INTERNAL,
                    message: format!(
                        "the bounded search found a countermodel to the proved formula `{f}`"
                    ),
                }),
                _ => Ok(code),
            }
        }
        Command::Countermodel(input) => {
            let f = io.formula(input)?;
            match countermodel(&f, &limits) {
                Ok(bundle) => {
                    let model = Some((&bundle.model, bundle.designated));
                    io.emit(&render_verdict(opts, &f, None, model, None));
                    Ok(EXIT_REFUTED)
                }
                Err(CounterModelError::Provable) => {
                    io.emit(&render_status_only(opts, &f, Status::Proved));
                    Ok(EXIT_PROVED)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::CheckProof { input } => {
            let text = io.read_source(input)?;
            let outcome = check_proof_document(&text)?;
            io.emit(&render_check(opts, &outcome));
            Ok(if outcome.is_ok() { EXIT_ACCEPTED } else { EXIT_REJECTED })
        }
        Command::CheckModel { input, formula } => {
            let text = io.read_source(input)?;
            let outcome = check_model_document(&text, formula.as_deref())?;
            io.emit(&render_check(opts, &outcome));
            Ok(if outcome.is_ok() { EXIT_ACCEPTED } else { EXIT_REJECTED })
        }
        Command::Exsub(input) => {
            let f = io.formula(input)?;
            let goal = Goal::new(f);
            let text = match opts.format {
                Format::Structured => {
                    let members: Vec<ExsubEntry> = goal
                        .exsub()
                        .iter()
                        .map(|f| ExsubEntry {
                            formula: f.to_string(),
                            complexity: f.complexity(),
                        })
                        .collect();
                    to_json(&members)
                }
                _ => render::exsub_text(goal.exsub()),
            };
            io.emit(&text);
            Ok(EXIT_PROVED)
        }
    }
}

#[derive(Serialize)]
struct ExsubEntry {
    formula: String,
    complexity: usize,
}

fn status_word(status: Status) -> &'static str {
    match status {
        Status::Proved => "PROVED",
        Status::Refuted => "REFUTED",
        Status::NotProved => "NOT PROVED",
    }
}

fn render_status_only(opts: &Options, f: &Formula, status: Status) -> String {
    match opts.format {
        Format::Structured => to_json(&VerdictDoc {
            status,
            formula: f.to_string(),
            proof: None,
            model: None,
            oracle: None,
        }),
        _ => format!("{}\n", status_word(status)),
    }
}

fn render_verdict(
    opts: &Options,
    f: &Formula,
    proof: Option<&isci_core::Derivation>,
    model: Option<(&KripkeModel, World)>,
    oracle: Option<&OracleDoc>,
) -> String {
    let status = match (proof, model) {
        (Some(_), _) => Status::Proved,
        (None, Some(_)) => Status::Refuted,
        (None, None) => Status::NotProved,
    };
    if opts.format == Format::Structured {
        let doc = VerdictDoc {
            status,
            formula: f.to_string(),
            proof: if opts.quiet { None } else { proof.map(proof_doc) },
            model: if opts.quiet {
                None
            } else {
                model.map(|(m, w)| model_doc(m, w, f))
            },
            oracle: oracle.cloned(),
        };
        return to_json(&doc);
    }
    let mut out = format!("{}\n", status_word(status));
    if let Some(o) = oracle {
        let found = if o.countermodel_found {
            "countermodel found"
        } else {
            "no countermodel"
        };
        let agree = if o.agrees { "agrees" } else { "DISAGREES" };
        out.push_str(&format!("oracle ({} worlds): {found}, {agree}\n", o.max_worlds));
    }
    if opts.quiet {
        return out;
    }
    let body = match (opts.format, proof, model) {
        (Format::Text, Some(d), _) => render::proof_text(d),
        (Format::Latex, Some(d), _) => render::proof_latex(d),
        (Format::Graph, Some(d), _) => render::proof_dot(d),
        (Format::Text, None, Some((m, w))) => render::model_text(m, w),
        (Format::Latex, None, Some((m, w))) => render::model_latex(m, w),
        (Format::Graph, None, Some((m, w))) => render::model_dot(m, w),
        _ => String::new(),
    };
    if opts.format == Format::Text {
        out.push_str(&body);
        out
    } else {
        // Graph and LaTeX output stays a single document.
        body
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ProofInput {
    Verdict(VerdictDoc),
    Proof(ProofDoc),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ModelInput {
    Verdict(VerdictDoc),
    Model(ModelDoc),
}

fn import_failure(e: impl std::fmt::Display) -> Failure {
    Failure::input(e.to_string())
}

/// `Ok(Err(reason))` is a well-formed document that fails the check.
fn check_proof_document(text: &str) -> Result<Result<(), String>, Failure> {
    let input: ProofInput = serde_json::from_str(text).map_err(import_failure)?;
    let (doc, claim) = match &input {
        ProofInput::Verdict(v) => {
            let f = import_formula(v).map_err(import_failure)?;
            let doc = v
                .proof
                .as_ref()
                .ok_or_else(|| Failure::input("document has no proof"))?;
            (doc, Some(Sequent::goal(f)))
        }
        ProofInput::Proof(p) => (p, None),
    };
    let d = import_proof(doc).map_err(import_failure)?;
    let claim = claim.unwrap_or_else(|| d.sequent.clone());
    Ok(check_proof(&d, &claim).map_err(|e| e.to_string()))
}

fn check_model_document(text: &str, formula: Option<&str>) -> Result<Result<(), String>, Failure> {
    let input: ModelInput = serde_json::from_str(text).map_err(import_failure)?;
    let (doc, from_doc) = match &input {
        ModelInput::Verdict(v) => (
            v.model
                .as_ref()
                .ok_or_else(|| Failure::input("document has no model"))?,
            Some(import_formula(v).map_err(import_failure)?),
        ),
        ModelInput::Model(m) => (m, None),
    };
    let f = match (formula, from_doc) {
        (Some(text), _) => {
            parse_formula(text).map_err(|e| Failure::input(format!("syntax error at {e}")))?
        }
        (None, Some(f)) => f,
        (None, None) => return Err(Failure::input("no formula: pass --formula")),
    };
    let (model, designated) = import_model(doc).map_err(import_failure)?;
    let goal = Goal::new(f);
    Ok(validate_refutation(&model, designated, &goal).map_err(|e| e.to_string()))
}

#[derive(Serialize)]
struct CheckDoc<'a> {
    accepted: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<&'a str>,
}

fn render_check(opts: &Options, outcome: &Result<(), String>) -> String {
    match opts.format {
        Format::Structured => to_json(&CheckDoc {
            accepted: outcome.is_ok(),
            reason: outcome.as_ref().err().map(String::as_str),
        }),
        _ => match outcome {
            Ok(()) => "ACCEPTED\n".to_owned(),
            Err(reason) => format!("REJECTED: {reason}\n"),
        },
    }
}

/// The structured verdict document for a decision, as `decide
/// --format structured` prints it.
pub fn decision_doc(f: &Formula, decision: &Decision) -> VerdictDoc {
    match decision {
        Decision::Proved { proof, .. } => VerdictDoc {
            status: Status::Proved,
            formula: f.to_string(),
            proof: Some(proof_doc(proof)),
            model: None,
            oracle: None,
        },
        Decision::Refuted { bundle, .. } => VerdictDoc {
            status: Status::Refuted,
            formula: f.to_string(),
            proof: None,
            model: Some(bundle_doc(bundle)),
            oracle: None,
        },
    }
}
