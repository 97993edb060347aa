//! Restricted backward proof search.
//!
//! At every node: stop at axioms; saturate with identity rules inside
//! ex.sub of the goal; then `R->` if the succedent is an implication
//! (never backtracked); otherwise try each `L->` instance in canonical
//! order, backtracking on failure. No sequent is repeated on a branch.
//!
//! The search runs on saturated sequents. A found proof is written out as
//! a derivation containing only the identity steps it uses.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::calculus::{apply_rule, invariants, is_axiom, Derivation, Goal, RuleInstance, Sequent};
use crate::formula::Formula;

pub const DEFAULT_MAX_NODES: u64 = 1_000_000;

/// Resource caps for a search.
#[derive(Clone, Copy)]
pub struct Limits<'a> {
    /// Cap on node expansions; `None` disables it.
    pub max_nodes: Option<u64>,
    /// Polled periodically; returning `true` aborts the search.
    pub interrupt: Option<&'a dyn Fn() -> bool>,
    /// Verify ex.sub membership, antecedent inheritance and the no-repeat
    /// condition on every expanded sequent.
    pub instrument: bool,
}

impl Default for Limits<'_> {
    fn default() -> Self {
        Limits {
            max_nodes: Some(DEFAULT_MAX_NODES),
            interrupt: None,
            instrument: false,
        }
    }
}

impl<'a> Limits<'a> {
    pub fn unlimited() -> Limits<'a> {
        Limits {
            max_nodes: None,
            interrupt: None,
            instrument: false,
        }
    }

    pub fn instrumented(mut self) -> Limits<'a> {
        self.instrument = true;
        self
    }
}

impl fmt::Debug for Limits<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Limits")
            .field("max_nodes", &self.max_nodes)
            .field("interrupt", &self.interrupt.is_some())
            .field("instrument", &self.instrument)
            .finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchError {
    NodeLimit(u64),
    Interrupted,
    /// An instrumented invariant failed; always a bug.
    Invariant(String),
}

impl fmt::Display for SearchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchError::NodeLimit(n) => write!(f, "node limit of {n} expansions reached"),
            SearchError::Interrupted => f.write_str("search interrupted (time limit)"),
            SearchError::Invariant(msg) => write!(f, "invariant violated: {msg}"),
        }
    }
}

impl core::error::Error for SearchError {}

impl SearchError {
    pub fn is_resource(&self) -> bool {
        matches!(self, SearchError::NodeLimit(_) | SearchError::Interrupted)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub expanded: u64,
    pub backtracks: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Proved(Derivation),
    NotProved,
}

impl Verdict {
    pub fn is_proved(&self) -> bool {
        matches!(self, Verdict::Proved(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofOutcome {
    pub verdict: Verdict,
    pub stats: SearchStats,
}

/// Decides whether `|- formula` has a restricted proof.
pub fn prove(formula: &Formula, limits: &Limits<'_>) -> Result<ProofOutcome, SearchError> {
    let goal = Goal::new(formula.clone());
    let mut search = Search::new(&goal, limits);
    let verdict = match search.prove(Sequent::goal(formula.clone()))? {
        Some(d) => Verdict::Proved(d),
        None => Verdict::NotProved,
    };
    Ok(ProofOutcome {
        verdict,
        stats: search.stats,
    })
}

/// Identity saturation spelled out rule by rule: repeatedly applies the
/// least identity instance that enlarges the antecedent and does not
/// recreate a sequent in `history`, stopping at a fixpoint or at an axiom.
///
/// Returns the chain of `(conclusion, instance)` steps; the last premise is
/// the returned sequent. The search itself represents the fixpoint by its
/// base ([`Goal::base`]) and never spells it out.
pub fn saturate_identities(
    s: &Sequent,
    goal: &Goal,
    history: &BTreeSet<Sequent>,
) -> (Vec<(Sequent, RuleInstance)>, Sequent) {
    let mut chain = Vec::new();
    let mut current = s.clone();
    while !is_axiom(&current) {
        let next = goal.identity_instances(&current).into_iter().find_map(|inst| {
            let premise = apply_rule(&current, &inst).ok()?.pop()?;
            (premise.antecedent.len() > current.antecedent.len() && !history.contains(&premise))
                .then_some((inst, premise))
        });
        match next {
            Some((inst, premise)) => {
                chain.push((current, inst));
                current = premise;
            }
            None => break,
        }
    }
    (chain, current)
}

/// Wraps `top` in the chain of single-premise steps leading to it.
pub(crate) fn wrap_chain(chain: Vec<(Sequent, RuleInstance)>, top: Derivation) -> Derivation {
    chain
        .into_iter()
        .rev()
        .fold(top, |acc, (s, inst)| Derivation::rule(s, inst, alloc::vec![acc]))
}

/// A derivation over saturated sequents: each node holds the base of its
/// antecedent's identity closure, and only the logical rules are recorded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Node {
    pub sat: Sequent,
    pub step: NodeStep,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum NodeStep {
    Axiom,
    Open,
    ImpRight(Box<Node>),
    ImpLeft(Formula, Box<Node>, Box<Node>),
}

impl Node {
    pub fn leaf(sat: Sequent, step: NodeStep) -> Node {
        Node { sat, step }
    }

    pub fn is_closed(&self) -> bool {
        match &self.step {
            NodeStep::Axiom => true,
            NodeStep::Open => false,
            NodeStep::ImpRight(n) => n.is_closed(),
            NodeStep::ImpLeft(_, l, r) => l.is_closed() && r.is_closed(),
        }
    }
}

/// Implications in the closure of the saturated sequent `s` that `L->`
/// may act on: not yet treated (consequent absent, antecedent not the
/// succedent). Canonical order.
pub(crate) fn untreated_implications(goal: &Goal, s: &Sequent) -> Vec<Formula> {
    goal.closure_core(&s.antecedent)
        .into_iter()
        .filter(|f| match f.as_implication() {
            Some((l, r)) => *l != s.succedent && !goal.in_closure(&s.antecedent, r),
            None => false,
        })
        .collect()
}

/// Saturated premises of `L->` on `imp` at the saturated sequent `s`.
pub(crate) fn imp_left_premises(goal: &Goal, s: &Sequent, imp: &Formula) -> (Sequent, Sequent) {
    let (l, r) = imp.as_implication().unwrap();
    (
        Sequent::new(s.antecedent.clone(), l.clone()),
        Sequent::new(goal.base_with(&s.antecedent, r), s.succedent.clone()),
    )
}

/// Saturated premise of `R->` at the saturated sequent `s`.
pub(crate) fn imp_right_premise(goal: &Goal, s: &Sequent) -> Sequent {
    let (l, r) = s.succedent.as_implication().unwrap();
    Sequent::new(goal.base_with(&s.antecedent, l), r.clone())
}

/// How much of the identity closure [`emit`] writes out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Materialize {
    /// Only formulas a logical rule or an axiom uses.
    Needed,
    /// Every saturated-core formula, before the node's logical rule.
    All,
}

/// Turns a saturated-sequent tree into a derivation in the calculus,
/// starting from the concrete sequent `root` (whose saturation is
/// `node.sat`). Identity steps are inserted where a formula of the
/// closure is first needed.
pub(crate) fn emit(goal: &Goal, root: &Sequent, node: &Node, mode: Materialize) -> Derivation {
    emit_node(goal, root.antecedent.clone(), root.succedent.clone(), node, mode)
}

fn emit_node(
    goal: &Goal,
    mut delta: BTreeSet<Formula>,
    succ: Formula,
    node: &Node,
    mode: Materialize,
) -> Derivation {
    let core = &node.sat.antecedent;
    let mut chain = Vec::new();
    if mode == Materialize::All {
        for x in &goal.closure_core(core) {
            derive(goal, core, &mut delta, &succ, x, &mut chain);
        }
    }
    let top = match &node.step {
        NodeStep::Axiom => {
            let used = if goal.in_closure(core, &succ) {
                succ.clone()
            } else {
                Formula::Bottom
            };
            derive(goal, core, &mut delta, &succ, &used, &mut chain);
            Derivation::axiom(Sequent::new(delta, succ))
        }
        NodeStep::Open => Derivation::open(Sequent::new(delta, succ)),
        NodeStep::ImpRight(premise) => {
            let (l, r) = succ.as_implication().unwrap();
            let mut next = delta.clone();
            next.insert(l.clone());
            let child = emit_node(goal, next, r.clone(), premise, mode);
            Derivation::rule(Sequent::new(delta, succ), RuleInstance::ImpRight, alloc::vec![child])
        }
        NodeStep::ImpLeft(imp, left, right) => {
            derive(goal, core, &mut delta, &succ, imp, &mut chain);
            let (l, r) = imp.as_implication().unwrap();
            let left = emit_node(goal, delta.clone(), l.clone(), left, mode);
            let mut next = delta.clone();
            next.insert(r.clone());
            let right = emit_node(goal, next, succ.clone(), right, mode);
            Derivation::rule(
                Sequent::new(delta, succ),
                RuleInstance::ImpLeft {
                    implication: imp.clone(),
                },
                alloc::vec![left, right],
            )
        }
    };
    wrap_chain(chain, top)
}

/// Appends identity steps adding `x`, a member of the closure of `delta`,
/// after whatever `x` depends on.
fn derive(
    goal: &Goal,
    core: &BTreeSet<Formula>,
    delta: &mut BTreeSet<Formula>,
    succ: &Formula,
    x: &Formula,
    chain: &mut Vec<(Sequent, RuleInstance)>,
) {
    if delta.contains(x) {
        return;
    }
    let inst = match x {
        Formula::Id(a, b) if a == b => RuleInstance::IdRefl {
            term: (**a).clone(),
        },
        Formula::Id(a, b) => {
            let ((op, a1, a2), (_, b1, b2)) = a.as_binary().zip(b.as_binary()).unwrap_or_else(|| {
                panic!("`{x}` is neither given nor composite");
            });
            let first = Formula::id(a1.clone(), b1.clone());
            let second = Formula::id(a2.clone(), b2.clone());
            derive(goal, core, delta, succ, &first, chain);
            derive(goal, core, delta, succ, &second, chain);
            RuleInstance::IdCongr { first, second, op }
        }
        Formula::Imp(a, b) => {
            let forward = Formula::id((**a).clone(), (**b).clone());
            let equation = if a == b || goal.in_closure(core, &forward) {
                forward
            } else {
                Formula::id((**b).clone(), (**a).clone())
            };
            derive(goal, core, delta, succ, &equation, chain);
            RuleInstance::IdSplit { equation }
        }
        _ => panic!("`{x}` is not produced by identity rules"),
    };
    let before = Sequent::new(delta.clone(), succ.clone());
    let premise = apply_rule(&before, &inst)
        .expect("identity step is applicable")
        .pop()
        .unwrap();
    *delta = premise.antecedent;
    chain.push((before, inst));
}

/// Search state; reusable for several sequents under the same goal.
///
/// Nodes are saturated sequents; the loop check compares saturated
/// sequents. A failure is remembered together with the branch sequents
/// the loop check blocked below it; it holds again whenever those are all
/// on the branch.
pub struct Search<'g, 'l> {
    goal: &'g Goal,
    limits: &'g Limits<'l>,
    history: BTreeSet<Sequent>,
    refuted: BTreeMap<Sequent, BTreeSet<Sequent>>,
    /// Antecedents of failures no loop check took part in, by succedent.
    /// Those sequents are unprovable, and so is every sequent with the
    /// same succedent and a smaller closure.
    unprovable: BTreeMap<Formula, Vec<BTreeSet<Formula>>>,
    blocked: BTreeSet<Sequent>,
    pub stats: SearchStats,
}

impl<'g, 'l> Search<'g, 'l> {
    pub fn new(goal: &'g Goal, limits: &'g Limits<'l>) -> Self {
        Search {
            goal,
            limits,
            history: BTreeSet::new(),
            refuted: BTreeMap::new(),
            unprovable: BTreeMap::new(),
            blocked: BTreeSet::new(),
            stats: SearchStats::default(),
        }
    }

    /// Starts with `history` (saturated sequents) as the sequents already
    /// on the branch.
    pub fn with_history(mut self, history: BTreeSet<Sequent>) -> Self {
        self.history = history;
        self
    }

    /// A proof of `s`, if the restricted search finds one.
    pub fn prove(&mut self, s: Sequent) -> Result<Option<Derivation>, SearchError> {
        let Some(node) = self.search(&s)? else {
            return Ok(None);
        };
        let d = emit(self.goal, &s, &node, Materialize::Needed);
        if self.limits.instrument {
            invariants::check_restricted(&d, self.goal).map_err(SearchError::Invariant)?;
        }
        Ok(Some(d))
    }

    /// [`Search::search`] with `history` as the branch so far.
    pub(crate) fn search_on_branch(
        &mut self,
        history: &BTreeSet<Sequent>,
        s: &Sequent,
    ) -> Result<Option<Node>, SearchError> {
        let saved = core::mem::replace(&mut self.history, history.clone());
        let result = self.search(s);
        self.history = saved;
        result
    }

    pub(crate) fn search(&mut self, s: &Sequent) -> Result<Option<Node>, SearchError> {
        let sat = self.goal.saturate_sequent(s);
        if self.history.contains(&sat) {
            self.blocked.insert(sat);
            return Ok(None);
        }
        self.node(sat, None)
    }

    fn tick(&mut self) -> Result<(), SearchError> {
        self.stats.expanded += 1;
        tick(self.stats.expanded, self.limits)
    }

    fn node(&mut self, s: Sequent, parent: Option<&Sequent>) -> Result<Option<Node>, SearchError> {
        if let Some(deps) = self.refuted.get(&s) {
            if deps.is_subset(&self.history) {
                self.blocked.extend(deps.iter().cloned());
                return Ok(None);
            }
        }
        if self.subsumed(&s) {
            return Ok(None);
        }
        if crate::refute::refuted_by_one_world(&s) {
            self.unprovable
                .entry(s.succedent.clone())
                .or_default()
                .push(s.antecedent.clone());
            self.refuted.insert(s, BTreeSet::new());
            return Ok(None);
        }
        self.tick()?;
        if self.limits.instrument {
            check_step(self.goal, &self.history, &s, parent)?;
        }
        let outer = core::mem::take(&mut self.blocked);
        self.history.insert(s.clone());
        let result = self.expand(&s);
        self.history.remove(&s);
        let mut deps = core::mem::replace(&mut self.blocked, outer);
        deps.remove(&s);
        if matches!(result, Ok(None)) {
            if deps.is_empty() {
                self.unprovable
                    .entry(s.succedent.clone())
                    .or_default()
                    .push(s.antecedent.clone());
            }
            self.refuted.insert(s, deps.clone());
        }
        self.blocked.extend(deps);
        result
    }

    fn subsumed(&self, s: &Sequent) -> bool {
        self.unprovable.get(&s.succedent).is_some_and(|larger| {
            larger
                .iter()
                .any(|g| s.antecedent.iter().all(|x| self.goal.in_closure(g, x)))
        })
    }

    fn expand(&mut self, s: &Sequent) -> Result<Option<Node>, SearchError> {
        if self.goal.is_saturated_axiom(s) {
            return Ok(Some(Node::leaf(s.clone(), NodeStep::Axiom)));
        }

        if self.goal.imp_right_allowed(s) {
            let premise = imp_right_premise(self.goal, s);
            if self.history.contains(&premise) {
                self.blocked.insert(premise);
            } else {
                return Ok(self
                    .node(premise, Some(s))?
                    .map(|n| Node::leaf(s.clone(), NodeStep::ImpRight(Box::new(n)))));
            }
        }

        // Antecedents only grow and weakening is admissible, so an
        // unprovable right premise makes `s` unprovable. The right premise
        // has a strictly larger closure than every ancestor, so the loop
        // check cannot be what blocks it.
        for imp in untreated_implications(self.goal, s) {
            let (left, right) = imp_left_premises(self.goal, s, &imp);
            if self.history.contains(&left) {
                self.blocked.insert(left);
                continue;
            }
            let Some(right) = self.node(right, Some(s))? else {
                return Ok(None);
            };
            let Some(left) = self.node(left, Some(s))? else {
                self.stats.backtracks += 1;
                continue;
            };
            return Ok(Some(Node::leaf(
                s.clone(),
                NodeStep::ImpLeft(imp, Box::new(left), Box::new(right)),
            )));
        }
        Ok(None)
    }
}

/// Node-cap and interrupt check after `expanded` expansions.
pub(crate) fn tick(expanded: u64, limits: &Limits<'_>) -> Result<(), SearchError> {
    if let Some(max) = limits.max_nodes {
        if expanded > max {
            return Err(SearchError::NodeLimit(max));
        }
    }
    if expanded.is_multiple_of(1024) {
        if let Some(stop) = limits.interrupt {
            if stop() {
                return Err(SearchError::Interrupted);
            }
        }
    }
    Ok(())
}

/// Instrumentation for a freshly built saturated sequent `s` whose
/// conclusion is `parent`.
pub(crate) fn check_step(
    goal: &Goal,
    history: &BTreeSet<Sequent>,
    s: &Sequent,
    parent: Option<&Sequent>,
) -> Result<(), SearchError> {
    if let Some(f) = s.formulas().find(|f| !goal.in_universe(f)) {
        return Err(SearchError::Invariant(format!(
            "`{f}` in `{s}` is outside the universe of {}",
            goal.formula()
        )));
    }
    if history.contains(s) {
        return Err(SearchError::Invariant(format!("`{s}` repeats on its branch")));
    }
    if let Some(parent) = parent {
        if let Some(f) = parent.antecedent.iter().find(|f| !goal.in_closure(&s.antecedent, f)) {
            return Err(SearchError::Invariant(format!(
                "`{f}` from `{parent}` not inherited by `{s}`"
            )));
        }
    }
    Ok(())
}
