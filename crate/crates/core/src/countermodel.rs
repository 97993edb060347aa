//! Countermodel construction for formulas the prover fails on.
//!
//! A second kind of restricted derivation is built in which every
//! antecedent implication is treated with `L->` before `R->` moves on to a
//! new world. The leftmost open branch is cut into worlds at its `R->`
//! steps. Each implication `a -> b` found in a succedent spawns one more
//! branch, for `Γ^M, a |- b` where `Γ^M` is the largest antecedent of the
//! world it sits in; the spawned branch's root world becomes a successor.
//! Worlds take their variables and equations from the antecedents they
//! contain.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;

use crate::calculus::{Derivation, Goal, RuleInstance, Sequent, Step};
use crate::formula::Formula;
use crate::prover::{
    check_step, emit, imp_left_premises, imp_right_premise, prove, tick, untreated_implications,
    Limits, Materialize, Node, NodeStep, Search, SearchError,
};
use crate::semantics::{
    equation_base, Assignment, Evaluator, Frame, KripkeModel, ModelChecks, ModelDefect, World,
    WorldSet,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CounterModelError {
    /// The formula has a proof; there is nothing to refute.
    Provable,
    /// A derivation expected to stay open closed.
    NoOpenBranch(Sequent),
    /// A spawned world sequent turned out provable.
    SpawnedProvable(Sequent),
    Search(SearchError),
    /// The assembled structure failed a check.
    Validation(String),
}

impl fmt::Display for CounterModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CounterModelError::Provable => f.write_str("formula is provable"),
            CounterModelError::NoOpenBranch(s) => {
                write!(f, "derivation of `{s}` has no open branch")
            }
            CounterModelError::SpawnedProvable(s) => {
                write!(f, "spawned sequent `{s}` is provable")
            }
            CounterModelError::Search(e) => write!(f, "{e}"),
            CounterModelError::Validation(msg) => write!(f, "countermodel validation failed: {msg}"),
        }
    }
}

impl core::error::Error for CounterModelError {}

impl From<SearchError> for CounterModelError {
    fn from(e: SearchError) -> Self {
        CounterModelError::Search(e)
    }
}

impl CounterModelError {
    pub fn is_resource(&self) -> bool {
        matches!(self, CounterModelError::Search(e) if e.is_resource())
    }
}

/// Whether an implication is already treated at `s`: its consequent is in
/// the antecedent or its antecedent is the succedent.
pub fn saturated_wrt(s: &Sequent, implication: &Formula) -> bool {
    match implication.as_implication() {
        Some((l, r)) => s.antecedent.contains(r) || s.succedent == *l,
        None => true,
    }
}

struct Builder<'g, 'l, 's> {
    goal: &'g Goal,
    limits: &'g Limits<'l>,
    search: &'s mut Search<'g, 'l>,
    history: BTreeSet<Sequent>,
    expanded: u64,
    /// Expand right premises even when the left one stays open.
    full: bool,
}

impl<'g, 'l, 's> Builder<'g, 'l, 's> {
    fn new(goal: &'g Goal, limits: &'g Limits<'l>, search: &'s mut Search<'g, 'l>, full: bool) -> Self {
        Builder {
            goal,
            limits,
            search,
            history: BTreeSet::new(),
            expanded: 0,
            full,
        }
    }

    fn build(&mut self, s: &Sequent) -> Result<Derivation, SearchError> {
        let node = self.node(self.goal.saturate_sequent(s), None)?;
        Ok(emit(self.goal, s, &node, Materialize::All))
    }

    fn node(&mut self, s: Sequent, parent: Option<&Sequent>) -> Result<Node, SearchError> {
        self.expanded += 1;
        tick(self.expanded, self.limits)?;
        if self.limits.instrument {
            check_step(self.goal, &self.history, &s, parent)?;
        }
        self.history.insert(s.clone());
        let result = self.expand(&s);
        self.history.remove(&s);
        result
    }

    fn expand(&mut self, s: &Sequent) -> Result<Node, SearchError> {
        if self.goal.is_saturated_axiom(s) {
            return Ok(Node::leaf(s.clone(), NodeStep::Axiom));
        }

        let pick = untreated_implications(self.goal, s).into_iter().find_map(|imp| {
            let (left, right) = imp_left_premises(self.goal, s, &imp);
            (!self.history.contains(&left) && !self.history.contains(&right))
                .then_some((imp, left, right))
        });

        if let Some((imp, left_seq, right_seq)) = pick {
            let mut left = self.node(left_seq.clone(), Some(s))?;
            if !left.is_closed() {
                // The leftmost open branch must run through unprovable
                // sequents only; a provable left premise gets a real proof.
                let before = self.search.stats.expanded;
                let found = self.search.search_on_branch(&self.history, &left_seq);
                self.expanded += self.search.stats.expanded - before;
                if let Some(proof) = found? {
                    left = proof;
                }
            }
            let right = if self.full || left.is_closed() {
                self.node(right_seq, Some(s))?
            } else {
                Node::leaf(right_seq, NodeStep::Open)
            };
            return Ok(Node::leaf(
                s.clone(),
                NodeStep::ImpLeft(imp, Box::new(left), Box::new(right)),
            ));
        }

        if self.goal.imp_right_allowed(s) {
            let premise = imp_right_premise(self.goal, s);
            if !self.history.contains(&premise) {
                let n = self.node(premise, Some(s))?;
                return Ok(Node::leaf(s.clone(), NodeStep::ImpRight(Box::new(n))));
            }
        }
        Ok(Node::leaf(s.clone(), NodeStep::Open))
    }
}

/// The complete derivation of `s` under the implication-first strategy:
/// axiom check, identity saturation, `L->` on the least untreated
/// antecedent implication (left premise expanded first, both premises
/// expanded), `R->` once every implication is treated, otherwise an open
/// leaf.
pub fn build_c5_derivation(s: &Sequent, goal: &Goal, limits: &Limits<'_>) -> Result<Derivation, SearchError> {
    let mut search = Search::new(goal, limits);
    Builder::new(goal, limits, &mut search, true).build(s)
}

/// A root-to-leaf run of sequent occurrences. `links[i]` is the rule
/// instance taking `sequents[i]` to `sequents[i + 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branch {
    pub sequents: Vec<Sequent>,
    pub links: Vec<RuleInstance>,
}

impl Branch {
    pub fn root(&self) -> &Sequent {
        &self.sequents[0]
    }

    pub fn leaf(&self) -> &Sequent {
        self.sequents.last().unwrap()
    }

    pub fn len(&self) -> usize {
        self.sequents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequents.is_empty()
    }
}

/// One occurrence of a sequent on a branch of the branch set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BranchOccurrence<'a> {
    pub branch: usize,
    pub position: usize,
    pub sequent: &'a Sequent,
}

/// The path to the leftmost open leaf.
pub fn leftmost_open_branch(d: &Derivation) -> Result<Branch, CounterModelError> {
    let mut sequents = Vec::new();
    let mut links = Vec::new();
    if find_open(d, &mut sequents, &mut links) {
        Ok(Branch { sequents, links })
    } else {
        Err(CounterModelError::NoOpenBranch(d.sequent.clone()))
    }
}

fn find_open(d: &Derivation, sequents: &mut Vec<Sequent>, links: &mut Vec<RuleInstance>) -> bool {
    sequents.push(d.sequent.clone());
    match &d.step {
        Step::Open => return true,
        Step::Axiom => {}
        Step::Rule { instance, premises } => {
            links.push(instance.clone());
            for p in premises {
                if find_open(p, sequents, links) {
                    return true;
                }
            }
            links.pop();
        }
    }
    sequents.pop();
    false
}

/// Builds only as much of the derivation as the leftmost open branch needs.
fn leftmost_branch_of<'g, 'l>(
    s: &Sequent,
    goal: &'g Goal,
    limits: &'g Limits<'l>,
    search: &mut Search<'g, 'l>,
) -> Result<Branch, CounterModelError> {
    let d = Builder::new(goal, limits, search, false).build(s)?;
    leftmost_open_branch(&d)
}

/// Splits a branch at its `R->` steps. Returns the position ranges of the
/// segments and the `(conclusion segment, premise segment)` edges.
pub fn segment_worlds(b: &Branch) -> (Vec<Range<usize>>, Vec<(usize, usize)>) {
    let mut segments = Vec::new();
    let mut edges = Vec::new();
    let mut start = 0;
    for (i, link) in b.links.iter().enumerate() {
        if *link == RuleInstance::ImpRight {
            segments.push(start..i + 1);
            edges.push((segments.len() - 1, segments.len()));
            start = i + 1;
        }
    }
    segments.push(start..b.sequents.len());
    (segments, edges)
}

/// `(branch, segment)`
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WorldId {
    pub branch: usize,
    pub segment: usize,
}

/// The closed set of branches with the cross-branch edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchSet {
    pub branches: Vec<Branch>,
    /// Edges from the world of an implication succedent to the root world
    /// of the branch spawned for it.
    pub spawn_edges: Vec<(WorldId, WorldId)>,
}

impl BranchSet {
    pub fn occurrences(&self) -> impl Iterator<Item = BranchOccurrence<'_>> {
        self.branches.iter().enumerate().flat_map(|(branch, b)| {
            b.sequents
                .iter()
                .enumerate()
                .map(move |(position, sequent)| BranchOccurrence {
                    branch,
                    position,
                    sequent,
                })
        })
    }
}

fn union_of_antecedents<'a>(seqs: impl IntoIterator<Item = &'a Sequent>) -> BTreeSet<Formula> {
    let mut out = BTreeSet::new();
    for s in seqs {
        out.extend(s.antecedent.iter().cloned());
    }
    out
}

/// Starts from the leftmost open branch for `|- φ` and adds, for every
/// occurrence `Γ |- a -> b`, the leftmost open branch for `Γ^M, a |- b`
/// (memoized on that sequent).
pub fn close_branch_set(goal: &Goal, limits: &Limits<'_>) -> Result<BranchSet, CounterModelError> {
    let root = Sequent::goal(goal.formula().clone());
    let mut search = Search::new(goal, limits);
    let mut branches = vec![leftmost_branch_of(&root, goal, limits, &mut search)?];
    let mut memo: BTreeMap<Sequent, usize> = BTreeMap::new();
    memo.insert(root, 0);
    let mut spawn_edges = Vec::new();

    let mut i = 0;
    while i < branches.len() {
        let (segments, _) = segment_worlds(&branches[i]);
        for (seg_index, seg) in segments.iter().enumerate() {
            let gamma_max = union_of_antecedents(&branches[i].sequents[seg.clone()]);
            for pos in seg.clone() {
                let Some((l, r)) = branches[i].sequents[pos].succedent.as_implication() else {
                    continue;
                };
                let mut antecedent = gamma_max.clone();
                antecedent.insert(l.clone());
                let spawned = Sequent::new(antecedent, r.clone());
                let target = match memo.get(&spawned) {
                    Some(t) => *t,
                    None => {
                        if search.search_on_branch(&BTreeSet::new(), &spawned)?.is_some() {
                            return Err(CounterModelError::SpawnedProvable(spawned));
                        }
                        branches.push(leftmost_branch_of(&spawned, goal, limits, &mut search)?);
                        memo.insert(spawned, branches.len() - 1);
                        branches.len() - 1
                    }
                };
                let edge = (
                    WorldId {
                        branch: i,
                        segment: seg_index,
                    },
                    WorldId {
                        branch: target,
                        segment: 0,
                    },
                );
                if !spawn_edges.contains(&edge) {
                    spawn_edges.push(edge);
                }
            }
        }
        i += 1;
    }
    Ok(BranchSet {
        branches,
        spawn_edges,
    })
}

/// A world of the assembled model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WorldInfo {
    pub id: WorldId,
    /// Positions of the member occurrences on the branch.
    pub members: Range<usize>,
    /// Union of the member antecedents.
    pub gamma_max: BTreeSet<Formula>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterModelBundle {
    pub formula: Formula,
    pub branch_set: BranchSet,
    pub worlds: Vec<WorldInfo>,
    /// Generating edges of the order (segment edges and spawn edges), as
    /// model world indices.
    pub edges: Vec<(World, World)>,
    pub model: KripkeModel,
    pub designated: World,
}

impl CounterModelBundle {
    pub fn member_sequents(&self, w: World) -> &[Sequent] {
        let info = &self.worlds[w];
        &self.branch_set.branches[info.id.branch].sequents[info.members.clone()]
    }
}

/// Value of a variable or equation at a world with largest antecedent
/// `gamma`: variables and equations of complexity at most `bound` are true
/// iff present; `x == x` is true; composite equations also hold by
/// componentwise decomposition.
pub fn world_value(f: &Formula, gamma: &BTreeSet<Formula>, bound: usize) -> bool {
    match f {
        Formula::Var(_) => gamma.contains(f),
        Formula::Id(l, r) => {
            if l == r || (f.complexity() <= bound && gamma.contains(f)) {
                return true;
            }
            match (l.as_binary(), r.as_binary()) {
                (Some((o1, a1, a2)), Some((o2, b1, b2))) if o1 == o2 => {
                    world_value(&Formula::id(a1.clone(), b1.clone()), gamma, bound)
                        && world_value(&Formula::id(a2.clone(), b2.clone()), gamma, bound)
                }
                _ => false,
            }
        }
        _ => false,
    }
}

/// Worlds, reflexive-transitive order and valuation from a branch set.
pub fn assemble_model(goal: &Goal, set: BranchSet) -> CounterModelBundle {
    let mut worlds = Vec::new();
    let mut index: BTreeMap<WorldId, World> = BTreeMap::new();
    let mut edges = Vec::new();
    for (b, branch) in set.branches.iter().enumerate() {
        let (segments, seg_edges) = segment_worlds(branch);
        let offset = worlds.len();
        for (s, range) in segments.into_iter().enumerate() {
            let id = WorldId {
                branch: b,
                segment: s,
            };
            index.insert(id, worlds.len());
            worlds.push(WorldInfo {
                id,
                gamma_max: union_of_antecedents(&branch.sequents[range.clone()]),
                members: range,
            });
        }
        edges.extend(seg_edges.into_iter().map(|(a, c)| (offset + a, offset + c)));
    }
    for (from, to) in &set.spawn_edges {
        edges.push((index[from], index[to]));
    }

    let n = worlds.len();
    let frame = Frame::closure_of(n, edges.iter().copied()).expect("edge endpoints are worlds");

    let bound = goal.bound();
    let mut base: BTreeSet<Formula> = goal
        .exsub()
        .iter()
        .filter(|f| f.class().is_atomic_for_valuation())
        .cloned()
        .collect();
    for w in &worlds {
        base.extend(
            w.gamma_max
                .iter()
                .filter(|f| f.class().is_atomic_for_valuation())
                .cloned(),
        );
    }
    let mut assignment = Assignment::new();
    for f in base {
        let truth = WorldSet::from_worlds(
            n,
            (0..n).filter(|w| world_value(&f, &worlds[*w].gamma_max, bound)),
        );
        assignment.set(f, truth);
    }

    CounterModelBundle {
        formula: goal.formula().clone(),
        designated: index[&WorldId {
            branch: 0,
            segment: 0,
        }],
        branch_set: set,
        worlds,
        edges,
        model: KripkeModel::new(frame, assignment),
    }
}

/// The checks every assembled countermodel must pass: frame, admissibility
/// on the stored base, monotonicity and the identity clause on equations
/// between extended subformulas, and the designated world not forcing the
/// formula.
pub fn validate_countermodel(bundle: &CounterModelBundle, goal: &Goal) -> Result<(), ModelDefect> {
    validate_refutation(&bundle.model, bundle.designated, goal)
}

/// [`validate_countermodel`] for any model refuting the goal formula at
/// `designated`, which must be a world of the model.
pub fn validate_refutation(model: &KripkeModel, designated: World, goal: &Goal) -> Result<(), ModelDefect> {
    let admissible: BTreeSet<Formula> = model
        .assignment
        .base()
        .filter(|f| f.is_equation())
        .cloned()
        .collect();
    let identity = equation_base(goal.exsub());
    ModelChecks::with_bases(&admissible, &identity, goal.exsub()).run(model)?;
    if Evaluator::new(model).forces(designated, goal.formula()) {
        return Err(ModelDefect::DesignatedForces {
            formula: goal.formula().clone(),
            world: designated,
        });
    }
    Ok(())
}

/// Structural properties of the construction, checked on the result:
///
/// * no variable or equation in a member succedent is true at its world
///   by presence in an antecedent (the `v0` value is 0);
/// * every true non-reflexive equation of complexity at most `c(φ)`
///   between extended subformulas occurs in a member antecedent;
/// * every member antecedent formula is forced at its world and no member
///   succedent is.
pub fn check_construction_invariants(bundle: &CounterModelBundle, goal: &Goal) -> Result<(), String> {
    let bound = goal.bound();
    let mut ev = Evaluator::new(&bundle.model);
    let candidates: Vec<Formula> = equation_base(goal.exsub())
        .into_iter()
        .filter(|e| e.complexity() <= bound && !e.is_reflexive_equation())
        .collect();

    for (w, info) in bundle.worlds.iter().enumerate() {
        for s in bundle.member_sequents(w) {
            let chi = &s.succedent;
            if chi.class().is_atomic_for_valuation()
                && (chi.is_reflexive_equation() || info.gamma_max.contains(chi))
            {
                return Err(format!(
                    "`{chi}` is a succedent in world {w} but has base value 1 there"
                ));
            }
            if let Some(f) = s.antecedent.iter().find(|f| !ev.forces(w, f)) {
                return Err(format!("world {w} does not force antecedent formula `{f}` of `{s}`"));
            }
            if ev.forces(w, chi) {
                return Err(format!("world {w} forces the succedent of `{s}`"));
            }
        }
        for e in &candidates {
            if ev.forces(w, e) && !info.gamma_max.contains(e) {
                return Err(format!("`{e}` holds at world {w} without occurring in it"));
            }
        }
    }

    for (w, info) in bundle.worlds.iter().enumerate() {
        for v in bundle.model.frame.successors(w).iter() {
            let same_branch = bundle.worlds[v].id.branch == info.id.branch;
            if same_branch && !info.gamma_max.is_subset(&bundle.worlds[v].gamma_max) {
                return Err(format!("antecedents shrink from world {w} to world {v}"));
            }
        }
    }
    for (from, to) in &bundle.edges {
        if !bundle.worlds[*from].gamma_max.is_subset(&bundle.worlds[*to].gamma_max) {
            return Err(format!("antecedents shrink along edge {from} -> {to}"));
        }
    }
    Ok(())
}

/// Builds, checks and returns a countermodel for `formula`.
pub fn countermodel(formula: &Formula, limits: &Limits<'_>) -> Result<CounterModelBundle, CounterModelError> {
    if prove(formula, limits)?.verdict.is_proved() {
        return Err(CounterModelError::Provable);
    }
    countermodel_unchecked_precondition(&Goal::new(formula.clone()), limits)
}

/// [`countermodel`] for a goal already known not to be provable.
pub fn countermodel_unchecked_precondition(
    goal: &Goal,
    limits: &Limits<'_>,
) -> Result<CounterModelBundle, CounterModelError> {
    let set = close_branch_set(goal, limits)?;
    let bundle = assemble_model(goal, set);
    validate_countermodel(&bundle, goal)
        .map_err(|e| CounterModelError::Validation(format!("{e}")))?;
    Ok(bundle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, parse_sequent};

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn seq(s: &str) -> Sequent {
        parse_sequent(s).unwrap()
    }

    fn limits() -> Limits<'static> {
        Limits::default().instrumented()
    }

    #[test]
    fn bare_variable_is_single_open_leaf() {
        let goal = Goal::new(f("p"));
        let d = build_c5_derivation(&seq("|- p"), &goal, &limits()).unwrap();
        assert_eq!(d, Derivation::open(seq("|- p")));
        let b = leftmost_open_branch(&d).unwrap();
        assert_eq!(b.sequents, vec![seq("|- p")]);
        let (segments, edges) = segment_worlds(&b);
        assert_eq!(segments, vec![0..1]);
        assert!(edges.is_empty());
    }

    #[test]
    fn reflexive_identity_closes() {
        let goal = Goal::new(f("p == p"));
        let d = build_c5_derivation(&seq("|- p == p"), &goal, &limits()).unwrap();
        assert!(d.is_closed());
        assert_eq!(
            leftmost_open_branch(&d),
            Err(CounterModelError::NoOpenBranch(seq("|- p == p")))
        );
    }

    #[test]
    fn implication_trace() {
        // The reflexive formulas p==p, q==q, p->p, q->q are in every
        // saturated antecedent and are never written out unless used, so
        // the branch is R-> to an open leaf.
        let goal = Goal::new(f("p -> q"));
        let d = build_c5_derivation(&seq("|- p -> q"), &goal, &limits()).unwrap();
        let b = leftmost_open_branch(&d).unwrap();
        assert_eq!(b.sequents, vec![seq("|- p -> q"), seq("p |- q")]);
        assert_eq!(b.links, vec![RuleInstance::ImpRight]);
        let (segments, edges) = segment_worlds(&b);
        assert_eq!(segments, vec![0..1, 1..2]);
        assert_eq!(edges, vec![(0, 1)]);

        let set = close_branch_set(&goal, &limits()).unwrap();
        assert_eq!(set.branches.len(), 2);
        assert_eq!(set.branches[1].sequents, vec![seq("p |- q")]);
    }

    #[test]
    fn nested_implication_countermodel() {
        let text = "p -> q -> r";
        let goal = Goal::new(f(text));
        let bundle = countermodel(&f(text), &limits()).unwrap();
        check_construction_invariants(&bundle, &goal).unwrap();
        let model = &bundle.model;
        let top = (0..bundle.worlds.len()).find(|w| {
            crate::semantics::forces(model, *w, &f("p"))
                && crate::semantics::forces(model, *w, &f("q"))
                && !crate::semantics::forces(model, *w, &f("r"))
        });
        assert!(model.frame.leq(bundle.designated, top.unwrap()));
    }

    #[test]
    fn variable_countermodel() {
        let bundle = countermodel(&f("p"), &limits()).unwrap();
        assert_eq!(bundle.worlds.len(), 1);
        assert!(bundle.branch_set.spawn_edges.is_empty());
        assert!(!crate::semantics::forces(&bundle.model, 0, &f("p")));
        assert!(crate::semantics::forces(&bundle.model, 0, &f("q == q")));
    }

    #[test]
    fn implication_countermodel_values() {
        let goal = Goal::new(f("p -> q"));
        let bundle = countermodel(&f("p -> q"), &limits()).unwrap();
        check_construction_invariants(&bundle, &goal).unwrap();
        let p_worlds: Vec<_> = (0..bundle.worlds.len())
            .filter(|w| bundle.worlds[*w].gamma_max.contains(&f("p")))
            .collect();
        assert!(!p_worlds.is_empty());
        for w in 0..bundle.worlds.len() {
            assert_eq!(
                crate::semantics::forces(&bundle.model, w, &f("p")),
                p_worlds.contains(&w)
            );
            assert!(!crate::semantics::forces(&bundle.model, w, &f("q")));
        }
        assert!(!crate::semantics::forces(&bundle.model, bundle.designated, &f("p -> q")));
    }

    #[test]
    fn provable_formula_has_no_countermodel() {
        assert_eq!(countermodel(&f("p -> p"), &limits()), Err(CounterModelError::Provable));
    }

    #[test]
    fn world_values() {
        let gamma: BTreeSet<Formula> = [f("p == q"), f("r == s")].into_iter().collect();
        assert!(world_value(&f("(p -> r) == (p -> r)"), &BTreeSet::new(), 0));
        assert!(world_value(&f("(p -> r) == (q -> s)"), &gamma, 3));
        assert!(!world_value(&f("(p -> r) == (q == s)"), &gamma, 3));
        assert!(!world_value(&f("q == p"), &gamma, 3));
        // Above the bound presence does not count.
        let gamma: BTreeSet<Formula> = [f("(p -> r) == (q -> s)")].into_iter().collect();
        assert!(!world_value(&f("(p -> r) == (q -> s)"), &gamma, 2));
    }

    #[test]
    fn lazy_branch_matches_full_derivation() {
        for text in ["((p -> q) -> p) -> p", "((p -> #) -> #) -> p", "(p -> q) -> p == q"] {
            let goal = Goal::new(f(text));
            let root = Sequent::goal(f(text));
            let full = build_c5_derivation(&root, &goal, &limits()).unwrap();
            assert_eq!(
                leftmost_open_branch(&full).unwrap(),
                leftmost_branch_of(&root, &goal, &limits(), &mut Search::new(&goal, &limits())).unwrap(),
                "{text}"
            );
        }
    }
}
