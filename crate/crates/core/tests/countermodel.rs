mod common;

use common::{check_countermodel, f, forces, formulas_of, NON_THEOREMS};
use isci_core::countermodel::{check_construction_invariants, validate_countermodel};
use isci_core::{countermodel, decide, CounterModelError, Decision, Formula, Goal, Limits};

fn refute(text: &str) -> isci_core::CounterModelBundle {
    match decide(&f(text), &Limits::default().instrumented()).unwrap() {
        Decision::Refuted { bundle, .. } => bundle,
        Decision::Proved { .. } => panic!("{text} proved"),
    }
}

fn check_bundle(bundle: &isci_core::CounterModelBundle) {
    let phi = &bundle.formula;
    let goal = Goal::new(phi.clone());
    check_countermodel(&bundle.model, &phi.extended_subformulas(), phi, bundle.designated)
        .unwrap_or_else(|e| panic!("{phi}: {e}"));
    validate_countermodel(bundle, &goal).unwrap();
    check_construction_invariants(bundle, &goal).unwrap_or_else(|e| panic!("{phi}: {e}"));
    assert_eq!(bundle.designated, 0);
    assert_eq!(bundle.worlds.len(), bundle.model.frame.size());
}

#[test]
fn non_theorems_get_checked_countermodels() {
    for text in NON_THEOREMS {
        check_bundle(&refute(text));
    }
}

#[test]
fn variable() {
    let b = refute("p");
    assert_eq!(b.model.frame.size(), 1);
    assert!(!forces(&b.model, 0, &f("p")));
}

#[test]
fn implication() {
    let b = refute("p -> q");
    check_bundle(&b);
    // Main branch: root and the `p |- q` segment; one spawned branch for
    // the implication succedent.
    assert_eq!(b.branch_set.branches.len(), 2);
    assert_eq!(b.model.frame.size(), 3);
    assert!(b.model.frame.leq(0, 1) && !b.model.frame.leq(1, 0));
    assert!(forces(&b.model, 1, &f("p")));
    assert!((0..3).all(|w| !forces(&b.model, w, &f("q"))));
}

#[test]
fn peirce_needs_a_proper_successor_for_q() {
    let b = refute("((p -> q) -> p) -> p");
    check_bundle(&b);
    let m = &b.model;
    // Somewhere above the root p fails while (p -> q) -> p holds.
    let w = (0..m.frame.size())
        .find(|w| forces(m, *w, &f("(p -> q) -> p")) && !forces(m, *w, &f("p")))
        .unwrap();
    assert!(m.frame.leq(b.designated, w));
    assert!((0..m.frame.size()).any(|v| m.frame.leq(w, v) && forces(m, v, &f("p")) && !forces(m, v, &f("q"))));
}

#[test]
fn double_negation_elimination() {
    let b = refute("((p -> #) -> #) -> p");
    check_bundle(&b);
    assert!(!forces(&b.model, b.designated, &f("p")));
}

#[test]
fn equations_between_distinct_terms() {
    for text in ["p == q", "(p -> p) == (q -> q)", "(p -> q) -> (p == q)"] {
        let b = refute(text);
        check_bundle(&b);
        assert!(!forces(&b.model, b.designated, &f(text)));
    }
}

#[test]
fn provable_formula_is_rejected() {
    let err = countermodel(&f("p -> p"), &Limits::default()).unwrap_err();
    assert_eq!(err, CounterModelError::Provable);
}

#[test]
fn small_formulas_refuted_are_well_formed() {
    let atoms = [Formula::var("p"), Formula::var("q"), Formula::Bottom];
    for c in 0..=2 {
        for phi in formulas_of(&atoms, c) {
            if let Decision::Refuted { bundle, .. } = decide(&phi, &Limits::default()).unwrap() {
                check_bundle(&bundle);
            }
        }
    }
}

#[test]
fn countermodels_are_deterministic() {
    for text in NON_THEOREMS {
        assert_eq!(refute(text), refute(text));
    }
}
