//! Sequents, the five rules, derivation trees and an independent proof
//! checker.
//!
//! Rules are applied backwards: a [`RuleInstance`] together with a
//! conclusion determines the premises.
//!
//! ```text
//!   Γ ⇒ φ    Γ, χ ⇒ ψ                    Γ, ψ ⇒ δ
//!   ------------------ L->  (φ->χ ∈ Γ)   ---------- R->
//!        Γ ⇒ ψ                           Γ ⇒ ψ -> δ
//!
//!   Γ, ψ==ψ ⇒ γ        Γ, φ->χ, χ->φ ⇒ γ           Γ, (ψ⊗φ)==(δ⊗χ) ⇒ γ
//!   ----------- L==1   ----------------- L==2     ------------------- L==3
//!     Γ ⇒ γ            Γ ⇒ γ  (φ==χ ∈ Γ)          Γ ⇒ γ  (ψ==δ, φ==χ ∈ Γ)
//! ```

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use core::cell::OnceCell;

use crate::formula::{extended_closure, Connective, Formula};

/// `Γ |- φ` with `Γ` a set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sequent {
    pub antecedent: BTreeSet<Formula>,
    pub succedent: Formula,
}

impl Sequent {
    pub fn new(antecedent: BTreeSet<Formula>, succedent: Formula) -> Sequent {
        Sequent {
            antecedent,
            succedent,
        }
    }

    /// `|- φ`
    pub fn goal(succedent: Formula) -> Sequent {
        Sequent::new(BTreeSet::new(), succedent)
    }

    fn with_added(&self, extra: impl IntoIterator<Item = Formula>) -> Sequent {
        let mut antecedent = self.antecedent.clone();
        antecedent.extend(extra);
        Sequent::new(antecedent, self.succedent.clone())
    }

    fn with_succedent(&self, succedent: Formula) -> Sequent {
        Sequent::new(self.antecedent.clone(), succedent)
    }

    /// Every formula in the sequent, antecedent first.
    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.antecedent.iter().chain(core::iter::once(&self.succedent))
    }

    pub fn implications(&self) -> impl Iterator<Item = (&Formula, &Formula, &Formula)> {
        self.antecedent
            .iter()
            .filter_map(|f| f.as_implication().map(|(l, r)| (f, l, r)))
    }

    pub fn equations(&self) -> impl Iterator<Item = &Formula> {
        self.antecedent.iter().filter(|f| f.is_equation())
    }
}

/// Succedent in the antecedent, or `#` in the antecedent.
pub fn is_axiom(s: &Sequent) -> bool {
    s.antecedent.contains(&s.succedent) || s.antecedent.contains(&Formula::Bottom)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    IdRefl,
    IdSplit,
    IdCongr,
    ImpRight,
    ImpLeft,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::IdRefl => "L==1",
            Rule::IdSplit => "L==2",
            Rule::IdCongr => "L==3",
            Rule::ImpRight => "R->",
            Rule::ImpLeft => "L->",
        }
    }

    pub fn from_name(name: &str) -> Option<Rule> {
        [
            Rule::IdRefl,
            Rule::IdSplit,
            Rule::IdCongr,
            Rule::ImpRight,
            Rule::ImpLeft,
        ]
        .into_iter()
        .find(|r| r.name() == name)
    }

    pub fn is_identity(self) -> bool {
        matches!(self, Rule::IdRefl | Rule::IdSplit | Rule::IdCongr)
    }
}

/// A rule together with its principal data.
///
/// The derived order (variant first, then principal formulas canonically)
/// is the order in which instances are tried: identity rules, then `R->`,
/// then `L->`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleInstance {
    /// Introduces `term == term`.
    IdRefl { term: Formula },
    /// Splits the antecedent equation into both implications.
    IdSplit { equation: Formula },
    /// From antecedent equations `a == b` (first) and `c == d` (second)
    /// introduces `(a op c) == (b op d)`.
    IdCongr {
        first: Formula,
        second: Formula,
        op: Connective,
    },
    ImpRight,
    /// Acts on the antecedent implication.
    ImpLeft { implication: Formula },
}

impl RuleInstance {
    pub fn rule(&self) -> Rule {
        match self {
            RuleInstance::IdRefl { .. } => Rule::IdRefl,
            RuleInstance::IdSplit { .. } => Rule::IdSplit,
            RuleInstance::IdCongr { .. } => Rule::IdCongr,
            RuleInstance::ImpRight => Rule::ImpRight,
            RuleInstance::ImpLeft { .. } => Rule::ImpLeft,
        }
    }

    /// The formula an identity rule adds as its active equation.
    pub fn active_equation(&self) -> Option<Formula> {
        match self {
            RuleInstance::IdRefl { term } => Some(Formula::id(term.clone(), term.clone())),
            RuleInstance::IdCongr { first, second, op } => {
                let (a, b) = first.as_equation()?;
                let (c, d) = second.as_equation()?;
                Some(Formula::id(
                    Formula::compose(*op, a.clone(), c.clone()),
                    Formula::compose(*op, b.clone(), d.clone()),
                ))
            }
            _ => None,
        }
    }
}

impl fmt::Display for RuleInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleInstance::IdRefl { term } => write!(f, "L==1 [{term}]"),
            RuleInstance::IdSplit { equation } => write!(f, "L==2 [{equation}]"),
            RuleInstance::IdCongr { first, second, op } => {
                write!(f, "L==3 [{first}; {second}; {}]", op.symbol())
            }
            RuleInstance::ImpRight => f.write_str("R->"),
            RuleInstance::ImpLeft { implication } => write!(f, "L-> [{implication}]"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InapplicableRule {
    pub instance: RuleInstance,
    pub sequent: Sequent,
    pub reason: &'static str,
}

impl fmt::Display for InapplicableRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} is not applicable to `{}`: {}",
            self.instance, self.sequent, self.reason
        )
    }
}

impl core::error::Error for InapplicableRule {}

/// Premises of `instance` applied backwards to `s`, left premise first.
pub fn apply_rule(s: &Sequent, instance: &RuleInstance) -> Result<Vec<Sequent>, InapplicableRule> {
    let fail = |reason| InapplicableRule {
        instance: instance.clone(),
        sequent: s.clone(),
        reason,
    };
    match instance {
        RuleInstance::ImpLeft { implication } => {
            let (l, r) = implication
                .as_implication()
                .ok_or_else(|| fail("principal formula is not an implication"))?;
            if !s.antecedent.contains(implication) {
                return Err(fail("principal implication is not in the antecedent"));
            }
            Ok(vec![
                s.with_succedent(l.clone()),
                s.with_added([r.clone()]),
            ])
        }
        RuleInstance::ImpRight => {
            let (l, r) = s
                .succedent
                .as_implication()
                .ok_or_else(|| fail("succedent is not an implication"))?;
            let mut premise = s.with_added([l.clone()]);
            premise.succedent = r.clone();
            Ok(vec![premise])
        }
        RuleInstance::IdRefl { term } => {
            Ok(vec![s.with_added([Formula::id(term.clone(), term.clone())])])
        }
        RuleInstance::IdSplit { equation } => {
            let (l, r) = equation
                .as_equation()
                .ok_or_else(|| fail("principal formula is not an equation"))?;
            if !s.antecedent.contains(equation) {
                return Err(fail("principal equation is not in the antecedent"));
            }
            Ok(vec![s.with_added([
                Formula::imp(l.clone(), r.clone()),
                Formula::imp(r.clone(), l.clone()),
            ])])
        }
        RuleInstance::IdCongr { first, second, .. } => {
            if !first.is_equation() || !second.is_equation() {
                return Err(fail("congruence needs two equations"));
            }
            if !s.antecedent.contains(first) || !s.antecedent.contains(second) {
                return Err(fail("an active equation is not in the antecedent"));
            }
            let composed = instance.active_equation().unwrap();
            Ok(vec![s.with_added([composed])])
        }
    }
}

/// The formula whose closed derivations are being searched.
///
/// Membership in ex.sub is decided structurally; the set itself is only
/// built on request.
#[derive(Clone, Debug)]
pub struct Goal {
    formula: Formula,
    bound: usize,
    sub: BTreeSet<Formula>,
    /// Every `t` with `t == t` in ex.sub, canonically ordered.
    reflexive_terms: Vec<Formula>,
    terms_by_complexity: Vec<Vec<Formula>>,
    exsub: OnceCell<BTreeSet<Formula>>,
}

/// `t == t` composes from `t1 == t1` and `t2 == t2`, so reflexive terms
/// are closed under both connectives up to `low`. Returned bucketed by
/// complexity.
fn compose_terms(seed: BTreeSet<Formula>, low: usize) -> Vec<Vec<Formula>> {
    let mut terms = seed.clone();
    let mut work: Vec<Formula> = seed.into_iter().collect();
    let mut buckets: Vec<Vec<Formula>> = alloc::vec![Vec::new(); low + 1];
    while let Some(t) = work.pop() {
        let c = t.complexity();
        buckets[c].push(t.clone());
        if c >= low {
            continue;
        }
        let mut fresh = Vec::new();
        for u in buckets[..low - c].iter().flatten() {
            for op in Connective::ALL {
                fresh.push(Formula::compose(op, t.clone(), u.clone()));
                fresh.push(Formula::compose(op, u.clone(), t.clone()));
            }
        }
        for x in fresh {
            if terms.insert(x.clone()) {
                work.push(x);
            }
        }
    }
    for bucket in &mut buckets {
        bucket.sort();
    }
    buckets
}

impl Goal {
    pub fn new(formula: Formula) -> Goal {
        let bound = formula.complexity();
        let sub = formula.subformulas();
        // Members of complexity k are built from members of complexity at
        // most k, so the low part of ex.sub is a closure of its own.
        let low = (bound.saturating_sub(1)) / 2;
        let seed = sub.iter().filter(|f| f.complexity() <= low).cloned().collect();
        let terms_by_complexity = if bound == 0 {
            Vec::new()
        } else {
            compose_terms(extended_closure(seed, low), low)
        };
        let mut reflexive_terms: Vec<Formula> = terms_by_complexity.concat();
        reflexive_terms.sort();
        Goal {
            formula,
            bound,
            sub,
            reflexive_terms,
            terms_by_complexity,
            exsub: OnceCell::new(),
        }
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    /// The full ex.sub set. Can be large for goals of complexity 7 or more.
    pub fn exsub(&self) -> &BTreeSet<Formula> {
        self.exsub.get_or_init(|| self.formula.extended_subformulas())
    }

    /// `f ∈ ex.sub(goal)`
    pub fn contains(&self, f: &Formula) -> bool {
        if self.sub.contains(f) {
            return true;
        }
        match f {
            Formula::Id(a, b) => self.equation_member(a, b),
            Formula::Imp(a, b) => self.equation_member(a, b) || self.equation_member(b, a),
            _ => false,
        }
    }

    /// Built from the goal's atoms with complexity at most `c(goal)`. Every
    /// formula of a restricted derivation lies here: ex.sub, the
    /// subformulas of its members and the splits of those equations.
    pub fn in_universe(&self, f: &Formula) -> bool {
        fn atoms_within(goal: &Goal, f: &Formula) -> bool {
            match f.as_binary() {
                Some((_, l, r)) => atoms_within(goal, l) && atoms_within(goal, r),
                None => goal.sub.contains(f),
            }
        }
        f.complexity() <= self.bound && atoms_within(self, f)
    }

    /// `a == b ∈ ex.sub(goal)`: a subformula, a reflexive equation on a
    /// member, or a componentwise composite of members.
    fn equation_member(&self, a: &Formula, b: &Formula) -> bool {
        if a.complexity() + b.complexity() + 1 > self.bound {
            return false;
        }
        if a == b && self.contains(a) {
            return true;
        }
        if let (Some((o1, a1, a2)), Some((o2, b1, b2))) = (a.as_binary(), b.as_binary()) {
            if o1 == o2 && self.equation_member(a1, b1) && self.equation_member(a2, b2) {
                return true;
            }
        }
        self.sub.contains(&Formula::id(a.clone(), b.clone()))
    }

    pub fn reflexive_terms(&self) -> &[Formula] {
        &self.reflexive_terms
    }

    /// `t == t` or `t -> t` for `t == t ∈ ex.sub`. These belong to every
    /// saturated antecedent.
    pub fn is_free(&self, f: &Formula) -> bool {
        match f {
            Formula::Id(a, b) | Formula::Imp(a, b) if a == b => self.equation_member(a, a),
            _ => false,
        }
    }

    /// `f` is in the identity closure (within ex.sub) of `antecedent`.
    ///
    /// Equations enter the closure as given, reflexive, or composed from
    /// closure equations; implications as given or split off a closure
    /// equation. Each case only looks at smaller formulas.
    pub fn in_closure(&self, antecedent: &BTreeSet<Formula>, f: &Formula) -> bool {
        antecedent.contains(f) || self.is_free(f) || self.derivable(antecedent, f)
    }

    /// `f` follows by one identity step from closure members other than
    /// `f` itself.
    fn derivable(&self, antecedent: &BTreeSet<Formula>, f: &Formula) -> bool {
        match f {
            Formula::Imp(a, b) => {
                self.in_closure(antecedent, &Formula::id((**a).clone(), (**b).clone()))
                    || self.in_closure(antecedent, &Formula::id((**b).clone(), (**a).clone()))
            }
            Formula::Id(a, b) if a != b && self.contains(f) => {
                match (a.as_binary(), b.as_binary()) {
                    (Some((o1, a1, a2)), Some((o2, b1, b2))) if o1 == o2 => {
                        self.in_closure(antecedent, &Formula::id(a1.clone(), b1.clone()))
                            && self.in_closure(antecedent, &Formula::id(a2.clone(), b2.clone()))
                    }
                    _ => false,
                }
            }
            _ => false,
        }
    }

    /// The least subset of `antecedent` with the same identity closure.
    /// Two antecedents have the same closure iff their bases are equal.
    pub fn base(&self, antecedent: &BTreeSet<Formula>) -> BTreeSet<Formula> {
        antecedent
            .iter()
            .filter(|f| !self.is_free(f) && !self.derivable(antecedent, f))
            .cloned()
            .collect()
    }

    /// Base of `base ∪ {extra}`.
    pub fn base_with(&self, base: &BTreeSet<Formula>, extra: &Formula) -> BTreeSet<Formula> {
        if self.in_closure(base, extra) {
            return base.clone();
        }
        let mut out = base.clone();
        out.insert(extra.clone());
        self.base(&out)
    }

    /// `s` with its antecedent replaced by its base.
    pub fn saturate_sequent(&self, s: &Sequent) -> Sequent {
        Sequent::new(self.base(&s.antecedent), s.succedent.clone())
    }

    /// Whether the identity closure of `s` is an axiom.
    pub fn is_saturated_axiom(&self, s: &Sequent) -> bool {
        s.antecedent.contains(&Formula::Bottom) || self.in_closure(&s.antecedent, &s.succedent)
    }

    /// The identity closure of `antecedent` within ex.sub, minus the free
    /// formulas.
    pub fn closure_core(&self, antecedent: &BTreeSet<Formula>) -> BTreeSet<Formula> {
        let core: BTreeSet<Formula> =
            antecedent.iter().filter(|f| !self.is_free(f)).cloned().collect();
        let work = core
            .iter()
            .filter(|f| f.is_equation() && !f.is_reflexive_equation())
            .cloned()
            .collect();
        self.close(core, Vec::new(), work)
    }

    /// Adds splits and composites of the `work` equations; `done` holds the
    /// equations whose consequences are already in `core`.
    fn close(
        &self,
        mut core: BTreeSet<Formula>,
        mut done: Vec<Formula>,
        mut work: Vec<Formula>,
    ) -> BTreeSet<Formula> {
        work.reverse();
        let mut fresh = Vec::new();
        while let Some(e) = work.pop() {
            let (a, b) = e.as_equation().unwrap();
            core.insert(Formula::imp(a.clone(), b.clone()));
            core.insert(Formula::imp(b.clone(), a.clone()));
            let ce = e.complexity();
            let partners = done
                .iter()
                .chain(core::iter::once(&e))
                .filter(|e2| ce + e2.complexity() < self.bound);
            for e2 in partners {
                let (c, d) = e2.as_equation().unwrap();
                for op in Connective::ALL {
                    fresh.push(Formula::id(
                        Formula::compose(op, a.clone(), c.clone()),
                        Formula::compose(op, b.clone(), d.clone()),
                    ));
                    fresh.push(Formula::id(
                        Formula::compose(op, c.clone(), a.clone()),
                        Formula::compose(op, d.clone(), b.clone()),
                    ));
                }
            }
            let room = if ce + 2 > self.bound {
                0
            } else {
                ((self.bound - ce - 2) / 2 + 1).min(self.terms_by_complexity.len())
            };
            for t in self.terms_by_complexity[..room].iter().flatten() {
                for op in Connective::ALL {
                    fresh.push(Formula::id(
                        Formula::compose(op, a.clone(), t.clone()),
                        Formula::compose(op, b.clone(), t.clone()),
                    ));
                    fresh.push(Formula::id(
                        Formula::compose(op, t.clone(), a.clone()),
                        Formula::compose(op, t.clone(), b.clone()),
                    ));
                }
            }
            done.push(e);
            for f in fresh.drain(..) {
                if !core.contains(&f) && self.contains(&f) {
                    core.insert(f.clone());
                    work.push(f);
                }
            }
        }
        core
    }

    /// Identity-rule instances for `s` that add something new, in canonical
    /// order. `L==1` and `L==3` are restricted to active equations in
    /// ex.sub; `L==2` is not restricted.
    pub fn identity_instances(&self, s: &Sequent) -> Vec<RuleInstance> {
        let mut out = Vec::new();
        for t in &self.reflexive_terms {
            if !s.antecedent.contains(&Formula::id(t.clone(), t.clone())) {
                out.push(RuleInstance::IdRefl { term: t.clone() });
            }
        }
        let equations: Vec<&Formula> = s.equations().collect();
        for e in &equations {
            let (l, r) = e.as_equation().unwrap();
            if !s.antecedent.contains(&Formula::imp(l.clone(), r.clone()))
                || !s.antecedent.contains(&Formula::imp(r.clone(), l.clone()))
            {
                out.push(RuleInstance::IdSplit {
                    equation: (*e).clone(),
                });
            }
        }
        for first in &equations {
            for second in &equations {
                for op in Connective::ALL {
                    let inst = RuleInstance::IdCongr {
                        first: (*first).clone(),
                        second: (*second).clone(),
                        op,
                    };
                    let composed = inst.active_equation().unwrap();
                    if !s.antecedent.contains(&composed) && self.contains(&composed) {
                        out.push(inst);
                    }
                }
            }
        }
        out
    }

    /// `L->` instances whose premises both differ from `s`.
    pub fn imp_left_instances(&self, s: &Sequent) -> Vec<RuleInstance> {
        s.implications()
            .filter(|(_, l, r)| **l != s.succedent && !s.antecedent.contains(*r))
            .map(|(f, _, _)| RuleInstance::ImpLeft {
                implication: f.clone(),
            })
            .collect()
    }

    /// Whether the succedent is an implication.
    pub fn imp_right_allowed(&self, s: &Sequent) -> bool {
        s.succedent.is_implication()
    }

    /// All non-trivial instances applicable to `s`, identity rules
    /// restricted to ex.sub, ordered by rule priority then principal data.
    pub fn applicable_instances(&self, s: &Sequent) -> Vec<RuleInstance> {
        let mut out = self.identity_instances(s);
        if self.imp_right_allowed(s) {
            out.push(RuleInstance::ImpRight);
        }
        out.extend(self.imp_left_instances(s));
        out.sort();
        out
    }
}

/// See [`Goal::applicable_instances`].
pub fn applicable_instances(s: &Sequent, goal_bound: &Formula) -> Vec<RuleInstance> {
    Goal::new(goal_bound.clone()).applicable_instances(s)
}

/// How a derivation node is justified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Axiom,
    Open,
    Rule {
        instance: RuleInstance,
        premises: Vec<Derivation>,
    },
}

/// A derivation tree. Children of an `L->` node are ordered left premise
/// first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub sequent: Sequent,
    pub step: Step,
}

impl Derivation {
    pub fn axiom(sequent: Sequent) -> Derivation {
        Derivation {
            sequent,
            step: Step::Axiom,
        }
    }

    pub fn open(sequent: Sequent) -> Derivation {
        Derivation {
            sequent,
            step: Step::Open,
        }
    }

    pub fn rule(sequent: Sequent, instance: RuleInstance, premises: Vec<Derivation>) -> Derivation {
        Derivation {
            sequent,
            step: Step::Rule { instance, premises },
        }
    }

    pub fn premises(&self) -> &[Derivation] {
        match &self.step {
            Step::Rule { premises, .. } => premises,
            _ => &[],
        }
    }

    /// No open leaves.
    pub fn is_closed(&self) -> bool {
        match &self.step {
            Step::Axiom => true,
            Step::Open => false,
            Step::Rule { premises, .. } => premises.iter().all(Derivation::is_closed),
        }
    }

    pub fn node_count(&self) -> usize {
        1 + self.premises().iter().map(Derivation::node_count).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        1 + self.premises().iter().map(Derivation::height).max().unwrap_or(0)
    }

    /// Pre-order traversal.
    pub fn nodes(&self) -> Vec<&Derivation> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(d) = stack.pop() {
            out.push(d);
            stack.extend(d.premises().iter().rev());
        }
        out
    }

    /// Every root-to-leaf path, leftmost first.
    pub fn branches(&self) -> Vec<Vec<&Derivation>> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        collect_branches(self, &mut path, &mut out);
        out
    }
}

fn collect_branches<'a>(
    d: &'a Derivation,
    path: &mut Vec<&'a Derivation>,
    out: &mut Vec<Vec<&'a Derivation>>,
) {
    path.push(d);
    if d.premises().is_empty() {
        out.push(path.clone());
    } else {
        for p in d.premises() {
            collect_branches(p, path, out);
        }
    }
    path.pop();
}

/// Why a tree was rejected, pointing at the first offending node (child
/// indices from the root).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckError {
    pub path: Vec<usize>,
    pub sequent: Sequent,
    pub reason: String,
}

impl fmt::Display for CheckError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at node ")?;
        if self.path.is_empty() {
            write!(f, "root")?;
        } else {
            for (i, p) in self.path.iter().enumerate() {
                if i > 0 {
                    f.write_str(".")?;
                }
                write!(f, "{p}")?;
            }
        }
        write!(f, " `{}`: {}", self.sequent, self.reason)
    }
}

impl core::error::Error for CheckError {}

/// Accepts iff the root is `claim`, every inner node's children are
/// exactly the premises of its rule instance, and every leaf is an axiom.
pub fn check_proof(d: &Derivation, claim: &Sequent) -> Result<(), CheckError> {
    if d.sequent != *claim {
        return Err(CheckError {
            path: Vec::new(),
            sequent: d.sequent.clone(),
            reason: format!("root does not match the claimed sequent `{claim}`"),
        });
    }
    check_tree(d, &mut Vec::new(), false)
}

/// Like [`check_proof`] but open leaves are allowed.
pub fn check_derivation(d: &Derivation) -> Result<(), CheckError> {
    check_tree(d, &mut Vec::new(), true)
}

fn check_tree(d: &Derivation, path: &mut Vec<usize>, allow_open: bool) -> Result<(), CheckError> {
    let error = |path: &Vec<usize>, reason: String| CheckError {
        path: path.clone(),
        sequent: d.sequent.clone(),
        reason,
    };
    match &d.step {
        Step::Axiom => {
            if is_axiom(&d.sequent) {
                Ok(())
            } else {
                Err(error(path, "leaf marked as axiom is not an axiom".into()))
            }
        }
        Step::Open => {
            if allow_open {
                Ok(())
            } else {
                Err(error(path, "open leaf".into()))
            }
        }
        Step::Rule { instance, premises } => {
            let expected =
                apply_rule(&d.sequent, instance).map_err(|e| error(path, format!("{e}")))?;
            if expected.len() != premises.len() {
                return Err(error(
                    path,
                    format!(
                        "{} has {} premise(s), found {}",
                        instance.rule().name(),
                        expected.len(),
                        premises.len()
                    ),
                ));
            }
            for (i, (want, got)) in expected.iter().zip(premises).enumerate() {
                if *want != got.sequent {
                    path.push(i);
                    let e = CheckError {
                        path: path.clone(),
                        sequent: got.sequent.clone(),
                        reason: format!("premise should be `{want}`"),
                    };
                    return Err(e);
                }
            }
            for (i, child) in premises.iter().enumerate() {
                path.push(i);
                check_tree(child, path, allow_open)?;
                path.pop();
            }
            Ok(())
        }
    }
}

/// Structural invariants every restricted derivation satisfies.
pub mod invariants {
    use super::*;

    /// Antecedents only grow from conclusion to premise.
    pub fn antecedents_inherited(d: &Derivation) -> Result<(), String> {
        for node in d.nodes() {
            for child in node.premises() {
                if !node.sequent.antecedent.is_subset(&child.sequent.antecedent) {
                    return Err(format!(
                        "antecedent of `{}` is not contained in premise `{}`",
                        node.sequent, child.sequent
                    ));
                }
            }
        }
        Ok(())
    }

    /// Every formula occurring in `d` is an extended subformula of the goal.
    pub fn within_exsub(d: &Derivation, goal: &Goal) -> Result<(), String> {
        for node in d.nodes() {
            if let Some(f) = node.sequent.formulas().find(|f| !goal.contains(f)) {
                return Err(format!(
                    "`{f}` in `{}` is not an extended subformula",
                    node.sequent
                ));
            }
        }
        Ok(())
    }

    /// No sequent repeats along any branch.
    pub fn no_repetition(d: &Derivation) -> Result<(), String> {
        let mut on_path = BTreeSet::new();
        walk(d, &mut on_path)
    }

    fn walk<'a>(d: &'a Derivation, on_path: &mut BTreeSet<&'a Sequent>) -> Result<(), String> {
        if !on_path.insert(&d.sequent) {
            return Err(format!("`{}` repeats on a branch", d.sequent));
        }
        for child in d.premises() {
            walk(child, on_path)?;
        }
        on_path.remove(&d.sequent);
        Ok(())
    }

    /// All three, plus well-formedness of each step.
    /// Every formula occurring in `d` is in the goal's finite universe.
    pub fn within_universe(d: &Derivation, goal: &Goal) -> Result<(), String> {
        for node in d.nodes() {
            if let Some(f) = node.sequent.formulas().find(|f| !goal.in_universe(f)) {
                return Err(format!("`{f}` in `{}` is outside the goal's universe", node.sequent));
            }
        }
        Ok(())
    }

    pub fn check_restricted(d: &Derivation, goal: &Goal) -> Result<(), String> {
        check_derivation(d).map_err(|e| format!("{e}"))?;
        antecedents_inherited(d)?;
        within_universe(d, goal)?;
        no_repetition(d)
    }
}
