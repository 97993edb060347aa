//! Text, LaTeX (bussproofs) and Graphviz renderings of proofs and models.

use std::collections::BTreeSet;
use std::fmt::Write;

use isci_core::calculus::Step;
use isci_core::{Derivation, Formula, KripkeModel, Rule, Sequent, World};

/// One node per line, premises indented under their conclusion.
pub fn proof_text(d: &Derivation) -> String {
    let mut out = String::new();
    proof_text_into(d, 0, &mut out);
    out
}

fn proof_text_into(d: &Derivation, depth: usize, out: &mut String) {
    let label = match &d.step {
        Step::Axiom => "axiom".to_owned(),
        Step::Open => "open".to_owned(),
        Step::Rule { instance, .. } => instance.to_string(),
    };
    let _ = writeln!(out, "{:indent$}{}   [{label}]", "", d.sequent, indent = 2 * depth);
    for p in d.premises() {
        proof_text_into(p, depth + 1, out);
    }
}

pub fn formula_latex(f: &Formula) -> String {
    match f {
        Formula::Bottom => "\\bot".to_owned(),
        Formula::Var(name) => name.replace('_', "\\_"),
        Formula::Imp(l, r) => {
            let l = if l.is_implication() {
                format!("({})", formula_latex(l))
            } else {
                formula_latex(l)
            };
            format!("{l} \\supset {}", formula_latex(r))
        }
        Formula::Id(l, r) => {
            let side = |x: &Formula| {
                if x.as_binary().is_some() {
                    format!("({})", formula_latex(x))
                } else {
                    formula_latex(x)
                }
            };
            format!("{} \\equiv {}", side(l), side(r))
        }
    }
}

pub fn sequent_latex(s: &Sequent) -> String {
    let ante: Vec<String> = s.antecedent.iter().map(formula_latex).collect();
    let ante = ante.join(", ");
    let sep = if ante.is_empty() { "" } else { " " };
    format!("{ante}{sep}\\Rightarrow {}", formula_latex(&s.succedent))
}

fn rule_latex(rule: Rule) -> &'static str {
    match rule {
        Rule::IdRefl => "$L{\\equiv}_1$",
        Rule::IdSplit => "$L{\\equiv}_2$",
        Rule::IdCongr => "$L{\\equiv}_3$",
        Rule::ImpRight => "$R{\\supset}$",
        Rule::ImpLeft => "$L{\\supset}$",
    }
}

/// A `prooftree` environment for the bussproofs package.
pub fn proof_latex(d: &Derivation) -> String {
    let mut out = String::from("\\begin{prooftree}\n");
    proof_latex_into(d, &mut out);
    out.push_str("\\end{prooftree}\n");
    out
}

fn proof_latex_into(d: &Derivation, out: &mut String) {
    let seq = sequent_latex(&d.sequent);
    match &d.step {
        Step::Axiom => {
            let _ = writeln!(out, "\\AxiomC{{${seq}$}}");
        }
        Step::Open => {
            let _ = writeln!(out, "\\AxiomC{{${seq}$ (open)}}");
        }
        Step::Rule { instance, premises } => {
            for p in premises {
                proof_latex_into(p, out);
            }
            let _ = writeln!(out, "\\RightLabel{{\\scriptsize {}}}", rule_latex(instance.rule()));
            let inf = match premises.len() {
                1 => "UnaryInfC",
                2 => "BinaryInfC",
                _ => "TrinaryInfC",
            };
            let _ = writeln!(out, "\\{inf}{{${seq}$}}");
        }
    }
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Conclusions point at nothing; each premise has an edge to its
/// conclusion labelled with the rule.
pub fn proof_dot(d: &Derivation) -> String {
    let mut out = String::from("digraph proof {\n  rankdir=BT;\n  node [shape=plaintext];\n");
    let mut next = 0;
    proof_dot_into(d, &mut next, &mut out);
    out.push_str("}\n");
    out
}

fn proof_dot_into(d: &Derivation, next: &mut usize, out: &mut String) -> usize {
    let id = *next;
    *next += 1;
    let style = if matches!(d.step, Step::Open) {
        ", fontcolor=red"
    } else {
        ""
    };
    let _ = writeln!(
        out,
        "  n{id} [label=\"{}\"{style}];",
        dot_escape(&d.sequent.to_string())
    );
    if let Step::Rule { instance, premises } = &d.step {
        for p in premises {
            let child = proof_dot_into(p, next, out);
            let _ = writeln!(
                out,
                "  n{child} -> n{id} [label=\"{}\"];",
                dot_escape(instance.rule().name())
            );
        }
    }
    id
}

/// Stored formulas true at `w`, leaving out `x == x`.
fn true_atoms(model: &KripkeModel, w: World) -> Vec<Formula> {
    model
        .assignment
        .stored()
        .filter(|(f, truth)| truth.contains(w) && !f.is_reflexive_equation())
        .map(|(f, _)| f.clone())
        .collect()
}

/// Pairs `a < b` with nothing strictly between.
fn covering_pairs(model: &KripkeModel) -> Vec<(World, World)> {
    let n = model.size();
    let leq = |a, b| model.frame.leq(a, b);
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a == b || !leq(a, b) {
                continue;
            }
            let between = (0..n).any(|c| c != a && c != b && leq(a, c) && leq(c, b) && !leq(c, a) && !leq(b, c));
            if !between {
                out.push((a, b));
            }
        }
    }
    out
}

pub fn model_text(model: &KripkeModel, designated: World) -> String {
    let n = model.size();
    let mut out = String::new();
    let worlds: Vec<String> = (0..n).map(|w| w.to_string()).collect();
    let _ = writeln!(out, "worlds: {}", worlds.join(" "));
    let order: Vec<String> = model
        .frame
        .pairs()
        .into_iter()
        .filter(|(a, b)| a != b)
        .map(|(a, b)| format!("{a} <= {b}"))
        .collect();
    let order = if order.is_empty() {
        "(reflexive only)".to_owned()
    } else {
        order.join(", ")
    };
    let _ = writeln!(out, "order: {order}");
    let _ = writeln!(out, "designated: {designated}");
    for w in 0..n {
        let atoms: Vec<String> = true_atoms(model, w).iter().map(|f| f.to_string()).collect();
        let atoms = if atoms.is_empty() {
            "(none)".to_owned()
        } else {
            atoms.join(", ")
        };
        let _ = writeln!(out, "  {w}: {atoms}");
    }
    out.push_str("other equations: x == x true, composites componentwise, the rest false\n");
    out
}

pub fn model_latex(model: &KripkeModel, designated: World) -> String {
    let mut out = String::from("\\begin{tabular}{l|l}\nworld & true atoms \\\\ \\hline\n");
    for w in 0..model.size() {
        let atoms: Vec<String> = true_atoms(model, w).iter().map(formula_latex).collect();
        let mark = if w == designated { "^{*}" } else { "" };
        let _ = writeln!(out, "${w}{mark}$ & ${}$ \\\\", atoms.join(",\\ "));
    }
    out.push_str("\\end{tabular}\n");
    let order: Vec<String> = covering_pairs(model)
        .into_iter()
        .map(|(a, b)| format!("{a} \\leq {b}"))
        .collect();
    if !order.is_empty() {
        let _ = writeln!(out, "\n$ {} $", order.join(",\\ "));
    }
    out
}

/// One node per world, edges for the covering relation of the order.
pub fn model_dot(model: &KripkeModel, designated: World) -> String {
    let mut out = String::from("digraph model {\n  rankdir=BT;\n");
    for w in 0..model.size() {
        let atoms: Vec<String> = true_atoms(model, w).iter().map(|f| f.to_string()).collect();
        let shape = if w == designated { "doublecircle" } else { "circle" };
        let label = if atoms.is_empty() {
            w.to_string()
        } else {
            format!("{w}\\n{}", dot_escape(&atoms.join(", ")))
        };
        let _ = writeln!(out, "  w{w} [label=\"{label}\", shape={shape}];");
    }
    for (a, b) in covering_pairs(model) {
        let _ = writeln!(out, "  w{a} -> w{b};");
    }
    out.push_str("}\n");
    out
}

/// `c  formula` lines, by complexity then canonical order.
pub fn exsub_text(members: &BTreeSet<Formula>) -> String {
    let mut sorted: Vec<&Formula> = members.iter().collect();
    sorted.sort_by_key(|f| f.complexity());
    let mut out = String::new();
    for f in sorted {
        let _ = writeln!(out, "{:>3}  {f}", f.complexity());
    }
    out
}
