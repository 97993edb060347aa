//! ex.sub, the membership predicate and the identity closure against naive
//! recomputations over every formula up to the complexity bound.

use std::collections::BTreeSet;

use isci_core::prover::saturate_identities;
use isci_core::{parse_formula, parse_sequent, Connective, Formula, Goal, Sequent};

fn f(s: &str) -> Formula {
    parse_formula(s).unwrap()
}

fn set(items: &[&str]) -> BTreeSet<Formula> {
    items.iter().map(|s| f(s)).collect()
}

/// Every formula over `atoms` with complexity at most `max`.
fn universe(atoms: &[Formula], max: usize) -> Vec<Formula> {
    let mut by_c: Vec<Vec<Formula>> = vec![atoms.to_vec()];
    for c in 1..=max {
        let mut level = Vec::new();
        for cl in 0..c {
            for a in &by_c[cl] {
                for b in &by_c[c - 1 - cl] {
                    level.push(Formula::imp(a.clone(), b.clone()));
                    level.push(Formula::id(a.clone(), b.clone()));
                }
            }
        }
        by_c.push(level);
    }
    by_c.concat()
}

fn atoms_of(phi: &Formula) -> Vec<Formula> {
    let mut atoms: Vec<Formula> = phi.variables().into_iter().collect();
    if phi.subformulas().contains(&Formula::Bottom) {
        atoms.push(Formula::Bottom);
    }
    atoms
}

/// Pull-style fixpoint: a candidate joins when one clause justifies it
/// from the current set.
fn naive_exsub(phi: &Formula) -> BTreeSet<Formula> {
    let n = phi.complexity();
    let candidates = universe(&atoms_of(phi), n);
    let mut s = phi.subformulas();
    loop {
        let mut grew = false;
        for x in &candidates {
            if s.contains(x) {
                continue;
            }
            let justified = match x {
                Formula::Id(a, b) => {
                    (a == b && s.contains(&**a))
                        || match (a.as_binary(), b.as_binary()) {
                            (Some((o1, a1, a2)), Some((o2, b1, b2))) => {
                                o1 == o2
                                    && s.contains(&Formula::id(a1.clone(), b1.clone()))
                                    && s.contains(&Formula::id(a2.clone(), b2.clone()))
                            }
                            _ => false,
                        }
                }
                Formula::Imp(a, b) => {
                    s.contains(&Formula::id((**a).clone(), (**b).clone()))
                        || s.contains(&Formula::id((**b).clone(), (**a).clone()))
                }
                _ => false,
            };
            if justified {
                s.insert(x.clone());
                grew = true;
            }
        }
        if !grew {
            return s;
        }
    }
}

const GOALS: &[&str] = &[
    "p",
    "p == q",
    "p -> q",
    "(p == q) -> r",
    "((p -> q) -> p) -> p",
    "((p -> #) -> #) -> p",
    "(p -> p) == (q -> q)",
    "(p == q) -> (q == p)",
    "(p == q) -> ((p -> #) == (q -> #))",
];

#[test]
fn exsub_matches_naive_fixpoint() {
    for text in GOALS {
        let phi = f(text);
        assert_eq!(phi.extended_subformulas(), naive_exsub(&phi), "{text}");
    }
}

#[test]
fn membership_predicate_matches_set() {
    for text in GOALS {
        let phi = f(text);
        let goal = Goal::new(phi.clone());
        let exsub = phi.extended_subformulas();
        let n = phi.complexity();
        for x in universe(&atoms_of(&phi), n) {
            assert_eq!(goal.contains(&x), exsub.contains(&x), "{x} in ex.sub({text})");
        }
        for x in &exsub {
            let over = Formula::id(x.clone(), phi.clone());
            assert!(!goal.contains(&over), "{over} exceeds the bound");
        }
        let reflexive: BTreeSet<Formula> = exsub
            .iter()
            .filter_map(|e| match e {
                Formula::Id(a, b) if a == b => Some((**a).clone()),
                _ => None,
            })
            .collect();
        let terms: BTreeSet<Formula> = goal.reflexive_terms().iter().cloned().collect();
        assert_eq!(terms, reflexive, "{text}");
    }
}

#[test]
fn small_exsub_examples() {
    assert_eq!(f("p").extended_subformulas(), set(&["p"]));
    assert_eq!(
        f("p == q").extended_subformulas(),
        set(&["p == q", "p", "q", "p == p", "q == q", "p -> q", "q -> p", "p -> p", "q -> q"])
    );
    assert_eq!(
        f("p -> q").extended_subformulas(),
        set(&["p -> q", "p", "q", "p == p", "q == q", "p -> p", "q -> q"])
    );
    // c = 3 admits composites of complexity-1 equations.
    let peirce = f("((p -> q) -> p) -> p").extended_subformulas();
    assert!(peirce.contains(&f("(q -> p) == (q -> p)")));
    assert!(peirce.contains(&f("(q -> p) -> q -> p")));
    assert!(!peirce.contains(&f("q -> p")));
}

#[test]
fn large_goal_membership_without_enumeration() {
    let goal = Goal::new(f("(p == q) -> (r == s) -> ((p == r) == (q == s))"));
    assert!(goal.contains(&f("((p -> r) == (q -> s)) -> ((p -> r) == (q -> s))")));
    assert!(goal.contains(&f("(p == r) == (q == s)")));
    assert!(!goal.contains(&f("((p -> #) -> r) == ((q -> #) -> s)")));
    assert!(goal.contains(&f("((p -> p) -> r) == ((q -> p) -> s)")));
    assert!(goal.contains(&f("((p -> p) -> (r -> r)) == ((q -> p) -> (s -> s))")));
    assert!(!goal.contains(&f("((p -> p) -> (r -> r) -> r) == ((q -> p) -> (s -> s) -> s)")));
}

/// Identity closure by repeated rule application over the ex.sub set.
fn naive_closure(phi: &Formula, antecedent: &BTreeSet<Formula>) -> BTreeSet<Formula> {
    let exsub = phi.extended_subformulas();
    let mut s = antecedent.clone();
    for e in &exsub {
        if let Formula::Id(a, b) = e {
            if a == b {
                s.insert(e.clone());
            }
        }
    }
    loop {
        let equations: Vec<(Formula, Formula)> = s
            .iter()
            .filter_map(|e| match e {
                Formula::Id(a, b) => Some(((**a).clone(), (**b).clone())),
                _ => None,
            })
            .collect();
        let mut next = s.clone();
        for (a, b) in &equations {
            next.insert(Formula::imp(a.clone(), b.clone()));
            next.insert(Formula::imp(b.clone(), a.clone()));
            for (c, d) in &equations {
                for x in [
                    Formula::id(Formula::imp(a.clone(), c.clone()), Formula::imp(b.clone(), d.clone())),
                    Formula::id(Formula::id(a.clone(), c.clone()), Formula::id(b.clone(), d.clone())),
                ] {
                    if exsub.contains(&x) {
                        next.insert(x);
                    }
                }
            }
        }
        if next == s {
            return s;
        }
        s = next;
    }
}

#[test]
fn closure_predicate_matches_literal_saturation() {
    let cases = [
        ("(p == q) -> r", "p == q"),
        ("(p == q) -> ((p -> #) == (q -> #))", "p == q"),
        ("(p == q) -> ((p -> #) == (q -> #))", "p == q, p -> #"),
        ("((p -> q) -> p) -> p", "(p -> q) -> p"),
        ("(p == q) -> ((p -> p) == (q -> q))", "p == q"),
        ("(p -> p) == (q -> q)", "(p -> p) == (q -> q)"),
    ];
    for (goal_text, antecedent) in cases {
        let phi = f(goal_text);
        let goal = Goal::new(phi.clone());
        let given = parse_sequent(&format!("{antecedent} |- zz")).unwrap().antecedent;
        assert!(given.iter().all(|g| goal.contains(g)));
        let literal = naive_closure(&phi, &given);
        if literal.len() < 100 {
            let s = Sequent::new(given.clone(), f("zz"));
            let (_, top) = saturate_identities(&s, &goal, &BTreeSet::new());
            assert_eq!(top.antecedent, literal, "{goal_text}");
        }
        let base = goal.base(&given);
        for x in universe(&atoms_of(&phi), phi.complexity()) {
            assert_eq!(
                goal.in_closure(&base, &x),
                literal.contains(&x),
                "{x} in closure of {antecedent} under {goal_text}"
            );
        }
        let mut core = goal.closure_core(&base);
        core.extend(literal.iter().filter(|x| goal.is_free(x)).cloned());
        assert_eq!(core, literal, "{goal_text}");
        assert_eq!(goal.base(&literal), base);
    }
}

#[test]
fn saturation_chain_example() {
    // p==q |- r under (p==q)->r: splits, reflexive equations and their
    // splits; no composite fits c <= 2.
    let goal = Goal::new(f("(p == q) -> r"));
    let s = parse_sequent("p == q |- r").unwrap();
    let (chain, top) = saturate_identities(&s, &goal, &BTreeSet::new());
    assert_eq!(
        top.antecedent,
        set(&["p == q", "p -> q", "q -> p", "p == p", "q == q", "r == r", "p -> p", "q -> q", "r -> r"])
    );
    assert!(chain.iter().all(|(_, inst)| inst.rule().is_identity()));
    let congr = chain
        .iter()
        .filter(|(_, inst)| matches!(inst, isci_core::RuleInstance::IdCongr { .. }))
        .count();
    assert_eq!(congr, 0);
    let _ = Connective::ALL;
}

#[test]
fn saturation_reaches_composite_axiom() {
    let goal = Goal::new(f("(p == q) -> ((r == s) -> ((p -> r) == (q -> s)))"));
    let s = parse_sequent("p == q, r == s |- (p -> r) == (q -> s)").unwrap();
    let base = goal.base(&s.antecedent);
    assert!(goal.is_saturated_axiom(&isci_core::Sequent::new(base, s.succedent.clone())));
}
