//! Checkers written against the rule and model definitions directly,
//! sharing no code with the library beyond its data types.

#![allow(dead_code)]

use std::collections::BTreeSet;

use isci_core::{Connective, Derivation, Formula, KripkeModel, RuleInstance, Sequent, Step};

pub const THEOREMS: &[&str] = &[
    "p -> p",
    "p -> q -> p",
    "(p -> q -> r) -> (p -> q) -> p -> r",
    "p == p",
    "(p == q) -> (p -> q)",
    "(p == q) -> (q -> p)",
    "(p == q) -> ((p -> #) == (q -> #))",
    "(p == q) -> (r == s) -> ((p -> r) == (q -> s))",
    "(p == q) -> (r == s) -> ((p == r) == (q == s))",
];

pub const NON_THEOREMS: &[&str] = &[
    "((p -> q) -> p) -> p",
    "((p -> #) -> #) -> p",
    "p == q",
    "(p -> q) -> (p == q)",
    "(p -> p) == (q -> q)",
];

/// Decided either way; the verdict is cross-checked semantically.
pub const SYMMETRY: &str = "(p == q) -> (q == p)";

pub fn f(s: &str) -> Formula {
    isci_core::parse_formula(s).unwrap()
}

/// Every formula over `atoms` of complexity exactly `c`.
pub fn formulas_of(atoms: &[Formula], c: usize) -> Vec<Formula> {
    if c == 0 {
        return atoms.to_vec();
    }
    let mut out = Vec::new();
    for cl in 0..c {
        for a in formulas_of(atoms, cl) {
            for b in formulas_of(atoms, c - 1 - cl) {
                out.push(Formula::imp(a.clone(), b.clone()));
                out.push(Formula::id(a.clone(), b.clone()));
            }
        }
    }
    out
}

fn with(s: &BTreeSet<Formula>, extra: impl IntoIterator<Item = Formula>) -> BTreeSet<Formula> {
    let mut out = s.clone();
    out.extend(extra);
    out
}

/// Checks every step of `d` against the rules; `Err` names the first bad
/// node. Open leaves are rejected.
pub fn check_rules(d: &Derivation) -> Result<(), String> {
    let gamma = &d.sequent.antecedent;
    let succ = &d.sequent.succedent;
    let expect = |premises: &[Derivation], wanted: Vec<Sequent>| -> Result<(), String> {
        let got: Vec<&Sequent> = premises.iter().map(|p| &p.sequent).collect();
        if got.len() != wanted.len() || got.iter().zip(&wanted).any(|(g, w)| *g != w) {
            return Err(format!("bad premises at `{}`", d.sequent));
        }
        premises.iter().try_for_each(check_rules)
    };
    match &d.step {
        Step::Axiom => {
            if gamma.contains(succ) || gamma.contains(&Formula::Bottom) {
                Ok(())
            } else {
                Err(format!("`{}` is not an axiom", d.sequent))
            }
        }
        Step::Open => Err(format!("open leaf `{}`", d.sequent)),
        Step::Rule { instance, premises } => match instance {
            RuleInstance::ImpRight => {
                let Formula::Imp(a, b) = succ else {
                    return Err(format!("R-> on non-implication at `{}`", d.sequent));
                };
                expect(premises, vec![Sequent::new(with(gamma, [(**a).clone()]), (**b).clone())])
            }
            RuleInstance::ImpLeft { implication } => {
                let Formula::Imp(a, b) = implication else {
                    return Err("L-> on non-implication".into());
                };
                if !gamma.contains(implication) {
                    return Err(format!("L-> principal missing at `{}`", d.sequent));
                }
                expect(
                    premises,
                    vec![
                        Sequent::new(gamma.clone(), (**a).clone()),
                        Sequent::new(with(gamma, [(**b).clone()]), succ.clone()),
                    ],
                )
            }
            RuleInstance::IdRefl { term } => expect(
                premises,
                vec![Sequent::new(
                    with(gamma, [Formula::id(term.clone(), term.clone())]),
                    succ.clone(),
                )],
            ),
            RuleInstance::IdSplit { equation } => {
                let Formula::Id(a, b) = equation else {
                    return Err("L==2 on non-equation".into());
                };
                if !gamma.contains(equation) {
                    return Err(format!("L==2 principal missing at `{}`", d.sequent));
                }
                let (a, b) = ((**a).clone(), (**b).clone());
                expect(
                    premises,
                    vec![Sequent::new(
                        with(gamma, [Formula::imp(a.clone(), b.clone()), Formula::imp(b, a)]),
                        succ.clone(),
                    )],
                )
            }
            RuleInstance::IdCongr { first, second, op } => {
                let (Formula::Id(a, b), Formula::Id(c, e)) = (first, second) else {
                    return Err("L==3 on non-equations".into());
                };
                if !gamma.contains(first) || !gamma.contains(second) {
                    return Err(format!("L==3 principal missing at `{}`", d.sequent));
                }
                let mk = |x: &Formula, y: &Formula| match op {
                    Connective::Imp => Formula::imp(x.clone(), y.clone()),
                    Connective::Id => Formula::id(x.clone(), y.clone()),
                };
                let composed = Formula::id(mk(a, c), mk(b, e));
                expect(premises, vec![Sequent::new(with(gamma, [composed]), succ.clone())])
            }
        },
    }
}

/// Value of a variable or equation, read off the stored assignment with
/// the default rule for unstored equations.
fn atom_value(model: &KripkeModel, f: &Formula, w: usize) -> bool {
    if let Some((_, set)) = model.assignment.stored().find(|(g, _)| *g == f) {
        return set.contains(w);
    }
    match f {
        Formula::Id(a, b) if a == b => true,
        Formula::Id(a, b) => match (&**a, &**b) {
            (Formula::Imp(a1, a2), Formula::Imp(b1, b2)) | (Formula::Id(a1, a2), Formula::Id(b1, b2))
                if std::mem::discriminant(&**a) == std::mem::discriminant(&**b) =>
            {
                atom_value(model, &Formula::id((**a1).clone(), (**b1).clone()), w)
                    && atom_value(model, &Formula::id((**a2).clone(), (**b2).clone()), w)
            }
            _ => false,
        },
        _ => false,
    }
}

pub fn forces(model: &KripkeModel, w: usize, f: &Formula) -> bool {
    match f {
        Formula::Bottom => false,
        Formula::Var(_) | Formula::Id(..) => atom_value(model, f, w),
        Formula::Imp(a, b) => (0..model.frame.size())
            .filter(|v| model.frame.leq(w, *v))
            .all(|v| !forces(model, v, a) || forces(model, v, b)),
    }
}

/// Frame laws, then the model conditions over `formulas` (reflexivity,
/// congruence and the identity clause for its equations, monotonicity for
/// all of them), then refutation of `goal` at `designated`.
pub fn check_countermodel(
    model: &KripkeModel,
    formulas: &BTreeSet<Formula>,
    goal: &Formula,
    designated: usize,
) -> Result<(), String> {
    let n = model.frame.size();
    let worlds = 0..n;
    for a in worlds.clone() {
        if !model.frame.leq(a, a) {
            return Err(format!("not reflexive at {a}"));
        }
        for b in worlds.clone() {
            for c in worlds.clone() {
                if model.frame.leq(a, b) && model.frame.leq(b, c) && !model.frame.leq(a, c) {
                    return Err(format!("not transitive at {a} {b} {c}"));
                }
            }
        }
    }
    for x in formulas {
        for w in worlds.clone() {
            if !forces(model, w, x) {
                continue;
            }
            if let Some(v) = worlds.clone().find(|v| model.frame.leq(w, *v) && !forces(model, *v, x)) {
                return Err(format!("`{x}` not monotone from {w} to {v}"));
            }
            if let Formula::Id(a, b) = x {
                let (a, b) = ((**a).clone(), (**b).clone());
                if !forces(model, w, &Formula::imp(a.clone(), b.clone())) || !forces(model, w, &Formula::imp(b, a)) {
                    return Err(format!("`{x}` at {w} without its implications"));
                }
            }
        }
        if let Formula::Id(a, b) = x {
            if a == b && worlds.clone().any(|w| !forces(model, w, x)) {
                return Err(format!("`{x}` fails somewhere"));
            }
        }
    }
    let equations: Vec<&Formula> = formulas.iter().filter(|x| matches!(x, Formula::Id(..))).collect();
    for e1 in &equations {
        for e2 in &equations {
            let (Formula::Id(a, b), Formula::Id(c, d)) = (e1, e2) else { unreachable!() };
            for composed in [
                Formula::id(Formula::imp((**a).clone(), (**c).clone()), Formula::imp((**b).clone(), (**d).clone())),
                Formula::id(Formula::id((**a).clone(), (**c).clone()), Formula::id((**b).clone(), (**d).clone())),
            ] {
                if !formulas.contains(&composed) {
                    continue;
                }
                for w in worlds.clone() {
                    if forces(model, w, e1) && forces(model, w, e2) && !forces(model, w, &composed) {
                        return Err(format!("congruence fails for `{composed}` at {w}"));
                    }
                }
            }
        }
    }
    if forces(model, designated, goal) {
        return Err(format!("designated world {designated} forces the goal"));
    }
    Ok(())
}
