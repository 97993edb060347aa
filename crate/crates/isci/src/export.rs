//! Structured documents for verdicts, proofs and models.
//!
//! Formulas and sequents are stored as their printed text, so documents
//! stay readable and re-parse to the same abstract syntax.
//!
//! ```text
//! verdict {status, formula, proof?, model?, oracle?}
//! proof   {sequent, rule, principal?, connective?, premises}
//! model   {worlds, order_pairs, valuation: [[formula, world, 0|1]], designated_world}
//! ```

use std::collections::BTreeSet;

use isci_core::calculus::Step;
use isci_core::semantics::Assignment;
use isci_core::{
    parse_formula, parse_sequent, Connective, CounterModelBundle, Derivation, Formula, Frame,
    KripkeModel, ParseError, RuleInstance, World,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Proved,
    Refuted,
    /// `prove` without model construction.
    NotProved,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictDoc {
    pub status: Status,
    pub formula: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub proof: Option<ProofDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofDoc {
    pub sequent: String,
    /// `axiom`, `open`, or a rule name such as `L->`.
    pub rule: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub principal: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub connective: Option<String>,
    #[serde(default)]
    pub premises: Vec<ProofDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelDoc {
    pub worlds: Vec<World>,
    pub order_pairs: Vec<(World, World)>,
    pub valuation: Vec<(String, World, u8)>,
    pub designated_world: World,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleDoc {
    pub max_worlds: usize,
    pub countermodel_found: bool,
    pub agrees: bool,
}

#[derive(Debug, Error)]
pub enum ImportError {
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("in `{text}`: {error}")]
    Syntax { text: String, error: ParseError },
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
    #[error("rule `{rule}` expects {expected} principal formula(s), found {found}")]
    Principal {
        rule: String,
        expected: usize,
        found: usize,
    },
    #[error("unknown connective `{0}`")]
    Connective(String),
    #[error("worlds must be 0..n in order")]
    WorldNumbering,
    #[error("world {0} does not exist")]
    NoSuchWorld(World),
    #[error("`{0}` is neither a variable nor an equation")]
    NotAtomic(String),
    #[error("valuation entry for `{0}` at world {1} is not 0 or 1")]
    Value(String, World),
    #[error("document has no {0}")]
    Missing(&'static str),
}

fn formula(text: &str) -> Result<Formula, ImportError> {
    parse_formula(text).map_err(|error| ImportError::Syntax {
        text: text.to_owned(),
        error,
    })
}

pub fn proof_doc(d: &Derivation) -> ProofDoc {
    let (rule, principal, connective, premises) = match &d.step {
        Step::Axiom => ("axiom".to_owned(), Vec::new(), None, Vec::new()),
        Step::Open => ("open".to_owned(), Vec::new(), None, Vec::new()),
        Step::Rule { instance, premises } => {
            let (principal, connective) = match instance {
                RuleInstance::IdRefl { term } => (vec![term.to_string()], None),
                RuleInstance::IdSplit { equation } => (vec![equation.to_string()], None),
                RuleInstance::IdCongr { first, second, op } => (
                    vec![first.to_string(), second.to_string()],
                    Some(op.symbol().to_owned()),
                ),
                RuleInstance::ImpRight => (Vec::new(), None),
                RuleInstance::ImpLeft { implication } => (vec![implication.to_string()], None),
            };
            (
                instance.rule().name().to_owned(),
                principal,
                connective,
                premises.iter().map(proof_doc).collect(),
            )
        }
    };
    ProofDoc {
        sequent: d.sequent.to_string(),
        rule,
        principal,
        connective,
        premises,
    }
}

pub fn import_proof(doc: &ProofDoc) -> Result<Derivation, ImportError> {
    let sequent = parse_sequent(&doc.sequent).map_err(|error| ImportError::Syntax {
        text: doc.sequent.clone(),
        error,
    })?;
    let expect = |n: usize| {
        if doc.principal.len() == n {
            Ok(())
        } else {
            Err(ImportError::Principal {
                rule: doc.rule.clone(),
                expected: n,
                found: doc.principal.len(),
            })
        }
    };
    let instance = match doc.rule.as_str() {
        "axiom" => return Ok(Derivation::axiom(sequent)),
        "open" => return Ok(Derivation::open(sequent)),
        "L==1" => {
            expect(1)?;
            RuleInstance::IdRefl {
                term: formula(&doc.principal[0])?,
            }
        }
        "L==2" => {
            expect(1)?;
            RuleInstance::IdSplit {
                equation: formula(&doc.principal[0])?,
            }
        }
        "L==3" => {
            expect(2)?;
            let op = match doc.connective.as_deref() {
                Some("->") => Connective::Imp,
                Some("==") => Connective::Id,
                Some(other) => return Err(ImportError::Connective(other.to_owned())),
                None => return Err(ImportError::Missing("connective for L==3")),
            };
            RuleInstance::IdCongr {
                first: formula(&doc.principal[0])?,
                second: formula(&doc.principal[1])?,
                op,
            }
        }
        "R->" => {
            expect(0)?;
            RuleInstance::ImpRight
        }
        "L->" => {
            expect(1)?;
            RuleInstance::ImpLeft {
                implication: formula(&doc.principal[0])?,
            }
        }
        other => return Err(ImportError::UnknownRule(other.to_owned())),
    };
    let premises = doc
        .premises
        .iter()
        .map(import_proof)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Derivation::rule(sequent, instance, premises))
}

/// Lists every stored formula at every world, plus every variable of
/// `formula` the assignment leaves at its default.
pub fn model_doc(model: &KripkeModel, designated: World, formula: &Formula) -> ModelDoc {
    let n = model.size();
    let mut atoms: BTreeSet<Formula> = model.assignment.base().cloned().collect();
    atoms.extend(formula.variables());
    let mut valuation = Vec::new();
    for atom in &atoms {
        let truth = model.assignment.truth(atom, n);
        for w in 0..n {
            valuation.push((atom.to_string(), w, u8::from(truth.contains(w))));
        }
    }
    ModelDoc {
        worlds: (0..n).collect(),
        order_pairs: model.frame.pairs(),
        valuation,
        designated_world: designated,
    }
}

pub fn bundle_doc(bundle: &CounterModelBundle) -> ModelDoc {
    model_doc(&bundle.model, bundle.designated, &bundle.formula)
}

/// The model and its designated world. The order is taken as given, so
/// a non-preorder is reported by the frame check, not here.
pub fn import_model(doc: &ModelDoc) -> Result<(KripkeModel, World), ImportError> {
    let n = doc.worlds.len();
    if doc.worlds.iter().enumerate().any(|(i, w)| i != *w) {
        return Err(ImportError::WorldNumbering);
    }
    let frame = Frame::new(n, doc.order_pairs.iter().copied()).ok_or_else(|| {
        let bad = doc
            .order_pairs
            .iter()
            .flat_map(|&(a, b)| [a, b])
            .find(|&w| w >= n)
            .unwrap_or(n);
        ImportError::NoSuchWorld(bad)
    })?;
    let mut assignment = Assignment::new();
    for (text, w, value) in &doc.valuation {
        let f = formula(text)?;
        if !f.class().is_atomic_for_valuation() {
            return Err(ImportError::NotAtomic(text.clone()));
        }
        if *w >= n {
            return Err(ImportError::NoSuchWorld(*w));
        }
        let value = match value {
            0 => false,
            1 => true,
            _ => return Err(ImportError::Value(text.clone(), *w)),
        };
        assignment.set_value(f, *w, value, n);
    }
    if doc.designated_world >= n {
        return Err(ImportError::NoSuchWorld(doc.designated_world));
    }
    Ok((KripkeModel::new(frame, assignment), doc.designated_world))
}

pub fn import_formula(doc: &VerdictDoc) -> Result<Formula, ImportError> {
    formula(&doc.formula)
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}
