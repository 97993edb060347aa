//! Kripke semantics: frames, assignments on variables and equations,
//! forcing, and the well-formedness checks a model has to pass.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use crate::formula::{Connective, Formula};

mod oracle;
mod worldset;

pub use oracle::{bounded_countermodel_search, OracleHit, OracleSearch, DEFAULT_ORACLE_WORLDS};
pub use worldset::WorldSet;

pub type World = usize;

/// Worlds `0..size` with a binary relation, stored as up-sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    size: usize,
    up: Vec<WorldSet>,
}

impl Frame {
    /// `None` if a pair mentions a world outside `0..size`.
    pub fn new(size: usize, pairs: impl IntoIterator<Item = (World, World)>) -> Option<Frame> {
        let mut up = alloc::vec![WorldSet::empty(size); size];
        for (a, b) in pairs {
            if a >= size || b >= size {
                return None;
            }
            up[a].insert(b);
        }
        Some(Frame { size, up })
    }

    /// Reflexive-transitive closure of `edges`.
    pub fn closure_of(size: usize, edges: impl IntoIterator<Item = (World, World)>) -> Option<Frame> {
        let mut frame = Frame::new(size, edges)?;
        for w in 0..size {
            frame.up[w].insert(w);
        }
        // Warshall over bitset rows.
        for k in 0..size {
            let row_k = frame.up[k].clone();
            for i in 0..size {
                if frame.up[i].contains(k) {
                    frame.up[i].union_with(&row_k);
                }
            }
        }
        Some(frame)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn leq(&self, a: World, b: World) -> bool {
        self.up[a].contains(b)
    }

    /// `{ b : a <= b }`
    pub fn successors(&self, a: World) -> &WorldSet {
        &self.up[a]
    }

    /// All pairs `(a, b)` with `a <= b`, in lexicographic order.
    pub fn pairs(&self) -> Vec<(World, World)> {
        (0..self.size)
            .flat_map(|a| self.up[a].iter().map(move |b| (a, b)))
            .collect()
    }
}

/// Reflexivity and transitivity.
pub fn check_frame(frame: &Frame) -> Result<(), ModelDefect> {
    for w in 0..frame.size {
        if !frame.leq(w, w) {
            return Err(ModelDefect::NotReflexive(w));
        }
    }
    for a in 0..frame.size {
        for b in frame.up[a].iter() {
            if !frame.up[b].is_subset(&frame.up[a]) {
                let c = frame.up[b].iter().find(|c| !frame.leq(a, *c)).unwrap();
                return Err(ModelDefect::NotTransitive(a, b, c));
            }
        }
    }
    Ok(())
}

/// Values of variables and equations.
///
/// Formulas in the stored base take their stored value. Outside the base an
/// equation `x == x` is true, `(a op b) == (c op d)` is true exactly where
/// both `a == c` and `b == d` are, and everything else is false.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment {
    values: BTreeMap<Formula, WorldSet>,
}

impl Assignment {
    pub fn new() -> Assignment {
        Assignment::default()
    }

    /// Stores the truth set of `formula`, adding it to the base.
    pub fn set(&mut self, formula: Formula, worlds: WorldSet) {
        debug_assert!(formula.class().is_atomic_for_valuation());
        self.values.insert(formula, worlds);
    }

    pub fn set_value(&mut self, formula: Formula, world: World, value: bool, size: usize) {
        let entry = self
            .values
            .entry(formula)
            .or_insert_with(|| WorldSet::empty(size));
        if value {
            entry.insert(world);
        } else {
            entry.remove(world);
        }
    }

    pub fn base(&self) -> impl Iterator<Item = &Formula> {
        self.values.keys()
    }

    pub fn stored(&self) -> impl Iterator<Item = (&Formula, &WorldSet)> {
        self.values.iter()
    }

    /// Truth set of a variable or equation over `size` worlds.
    pub fn truth(&self, f: &Formula, size: usize) -> WorldSet {
        if let Some(s) = self.values.get(f) {
            return s.clone();
        }
        match f {
            Formula::Id(l, r) if l == r => WorldSet::full(size),
            Formula::Id(l, r) => match (l.as_binary(), r.as_binary()) {
                (Some((o1, a1, a2)), Some((o2, b1, b2))) if o1 == o2 => {
                    let mut s = self.truth(&Formula::id(a1.clone(), b1.clone()), size);
                    s.intersect_with(&self.truth(&Formula::id(a2.clone(), b2.clone()), size));
                    s
                }
                _ => WorldSet::empty(size),
            },
            _ => WorldSet::empty(size),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KripkeModel {
    pub frame: Frame,
    pub assignment: Assignment,
}

impl KripkeModel {
    pub fn new(frame: Frame, assignment: Assignment) -> KripkeModel {
        KripkeModel { frame, assignment }
    }

    pub fn size(&self) -> usize {
        self.frame.size
    }

    pub fn evaluator(&self) -> Evaluator<'_> {
        Evaluator::new(self)
    }
}

/// Forcing evaluation with a per-formula cache of truth sets.
pub struct Evaluator<'m> {
    model: &'m KripkeModel,
    cache: BTreeMap<Formula, WorldSet>,
}

impl<'m> Evaluator<'m> {
    pub fn new(model: &'m KripkeModel) -> Self {
        Evaluator {
            model,
            cache: BTreeMap::new(),
        }
    }

    /// The worlds forcing `f`.
    pub fn truth(&mut self, f: &Formula) -> WorldSet {
        if let Some(s) = self.cache.get(f) {
            return s.clone();
        }
        let n = self.model.size();
        let s = match f {
            Formula::Bottom => WorldSet::empty(n),
            Formula::Var(_) | Formula::Id(..) => self.model.assignment.truth(f, n),
            Formula::Imp(l, r) => {
                let a = self.truth(l);
                let b = self.truth(r);
                WorldSet::from_worlds(
                    n,
                    (0..n).filter(|w| self.model.frame.successors(*w).meet_within(&a, &b)),
                )
            }
        };
        self.cache.insert(f.clone(), s.clone());
        s
    }

    pub fn forces(&mut self, w: World, f: &Formula) -> bool {
        self.truth(f).contains(w)
    }
}

pub fn forces(model: &KripkeModel, w: World, f: &Formula) -> bool {
    Evaluator::new(model).forces(w, f)
}

/// Forced at every world.
pub fn valid_in_model(model: &KripkeModel, f: &Formula) -> bool {
    Evaluator::new(model).truth(f).len() == model.size()
}

/// A reason a structure is not a well-formed model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelDefect {
    NotReflexive(World),
    NotTransitive(World, World, World),
    /// `x == x` false somewhere.
    Reflexivity { equation: Formula, world: World },
    /// Both components true but the composed equation false.
    Congruence {
        first: Formula,
        second: Formula,
        composed: Formula,
        world: World,
    },
    Monotonicity { formula: Formula, from: World, to: World },
    /// Forced equation whose implication is not forced.
    IdentityImplication { equation: Formula, world: World },
    DesignatedForces { formula: Formula, world: World },
}

impl fmt::Display for ModelDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelDefect::NotReflexive(w) => write!(f, "order is not reflexive at world {w}"),
            ModelDefect::NotTransitive(a, b, c) => write!(
                f,
                "order is not transitive: {a} <= {b} <= {c} but not {a} <= {c}"
            ),
            ModelDefect::Reflexivity { equation, world } => {
                write!(f, "`{equation}` is false at world {world}")
            }
            ModelDefect::Congruence {
                first,
                second,
                composed,
                world,
            } => write!(
                f,
                "`{first}` and `{second}` hold at world {world} but `{composed}` does not"
            ),
            ModelDefect::Monotonicity { formula, from, to } => write!(
                f,
                "`{formula}` is forced at world {from} but not at its successor {to}"
            ),
            ModelDefect::IdentityImplication { equation, world } => write!(
                f,
                "`{equation}` is forced at world {world} but one of its implications is not"
            ),
            ModelDefect::DesignatedForces { formula, world } => {
                write!(f, "designated world {world} forces `{formula}`")
            }
        }
    }
}

impl core::error::Error for ModelDefect {}

/// A reusable battery of checks over fixed formula sets, so that many
/// models can be checked without rebuilding the composed formulas.
#[derive(Clone, Debug)]
pub struct ModelChecks {
    reflexive: Vec<Formula>,
    congruences: Vec<(Formula, Formula, Formula)>,
    identity: Vec<(Formula, Formula, Formula)>,
    monotone: Vec<Formula>,
}

impl ModelChecks {
    /// `equations` is the base for admissibility and the identity clause;
    /// `formulas` is the set monotonicity is checked on (the equations
    /// are always included).
    pub fn new<'a>(
        equations: impl IntoIterator<Item = &'a Formula>,
        formulas: impl IntoIterator<Item = &'a Formula>,
    ) -> ModelChecks {
        let equations: Vec<&Formula> = equations.into_iter().collect();
        Self::with_bases(equations.iter().copied(), equations.iter().copied(), formulas)
    }

    /// Separate bases: congruence is checked for all pairs drawn from
    /// `admissible`, the identity clause for each of `identity`.
    pub fn with_bases<'a>(
        admissible: impl IntoIterator<Item = &'a Formula>,
        identity: impl IntoIterator<Item = &'a Formula>,
        formulas: impl IntoIterator<Item = &'a Formula>,
    ) -> ModelChecks {
        let equations: Vec<&Formula> = admissible.into_iter().filter(|e| e.is_equation()).collect();
        let identity_eqs: Vec<&Formula> = identity.into_iter().filter(|e| e.is_equation()).collect();

        let mut material = BTreeSet::new();
        for e in &equations {
            material.extend(e.subformulas());
        }
        let reflexive = material
            .iter()
            .map(|x| Formula::id(x.clone(), x.clone()))
            .collect();

        let mut congruences = Vec::new();
        for e1 in &equations {
            for e2 in &equations {
                let (a, b) = e1.as_equation().unwrap();
                let (c, d) = e2.as_equation().unwrap();
                for op in Connective::ALL {
                    let composed = Formula::id(
                        Formula::compose(op, a.clone(), c.clone()),
                        Formula::compose(op, b.clone(), d.clone()),
                    );
                    congruences.push(((*e1).clone(), (*e2).clone(), composed));
                }
            }
        }

        let identity = identity_eqs
            .iter()
            .map(|e| {
                let (l, r) = e.as_equation().unwrap();
                (
                    (*e).clone(),
                    Formula::imp(l.clone(), r.clone()),
                    Formula::imp(r.clone(), l.clone()),
                )
            })
            .collect();

        let mut monotone: BTreeSet<Formula> = formulas.into_iter().cloned().collect();
        monotone.extend(equations.iter().map(|e| (*e).clone()));
        monotone.extend(identity_eqs.iter().map(|e| (*e).clone()));

        ModelChecks {
            reflexive,
            congruences,
            identity,
            monotone: monotone.into_iter().collect(),
        }
    }

    /// Frame, admissibility, monotonicity and the identity clause.
    pub fn run(&self, model: &KripkeModel) -> Result<(), ModelDefect> {
        check_frame(&model.frame)?;
        let mut ev = Evaluator::new(model);
        self.admissible(&mut ev)?;
        self.monotone(&mut ev)?;
        self.identity(&mut ev)
    }

    fn admissible(&self, ev: &mut Evaluator<'_>) -> Result<(), ModelDefect> {
        let n = ev.model.size();
        for e in &self.reflexive {
            let t = ev.truth(e);
            if t.len() != n {
                let world = (0..n).find(|w| !t.contains(*w)).unwrap();
                return Err(ModelDefect::Reflexivity {
                    equation: e.clone(),
                    world,
                });
            }
        }
        for (first, second, composed) in &self.congruences {
            let mut both = ev.truth(first);
            both.intersect_with(&ev.truth(second));
            let t = ev.truth(composed);
            if !both.is_subset(&t) {
                let world = both.iter().find(|w| !t.contains(*w)).unwrap();
                return Err(ModelDefect::Congruence {
                    first: first.clone(),
                    second: second.clone(),
                    composed: composed.clone(),
                    world,
                });
            }
        }
        Ok(())
    }

    fn monotone(&self, ev: &mut Evaluator<'_>) -> Result<(), ModelDefect> {
        for f in &self.monotone {
            let t = ev.truth(f);
            for w in t.iter() {
                let succ = ev.model.frame.successors(w);
                if !succ.is_subset(&t) {
                    let to = succ.iter().find(|v| !t.contains(*v)).unwrap();
                    return Err(ModelDefect::Monotonicity {
                        formula: f.clone(),
                        from: w,
                        to,
                    });
                }
            }
        }
        Ok(())
    }

    fn identity(&self, ev: &mut Evaluator<'_>) -> Result<(), ModelDefect> {
        for (e, forward, backward) in &self.identity {
            let t = ev.truth(e);
            let mut both = ev.truth(forward);
            both.intersect_with(&ev.truth(backward));
            if !t.is_subset(&both) {
                let world = t.iter().find(|w| !both.contains(*w)).unwrap();
                return Err(ModelDefect::IdentityImplication {
                    equation: e.clone(),
                    world,
                });
            }
        }
        Ok(())
    }
}

/// Reflexivity of `==` on base material and congruence for every pair of
/// base equations under both connectives.
pub fn check_admissible(model: &KripkeModel, base: &BTreeSet<Formula>) -> Result<(), ModelDefect> {
    ModelChecks::with_bases(base, core::iter::empty(), core::iter::empty()).admissible(&mut Evaluator::new(model))
}

/// Forcing is upward closed for each formula in `formulas`.
pub fn check_monotonicity(model: &KripkeModel, formulas: &BTreeSet<Formula>) -> Result<(), ModelDefect> {
    let checks = ModelChecks {
        reflexive: Vec::new(),
        congruences: Vec::new(),
        identity: Vec::new(),
        monotone: formulas.iter().cloned().collect(),
    };
    checks.monotone(&mut Evaluator::new(model))
}

/// Wherever a base equation is forced, both of its implications are.
pub fn check_identity_entails_implications(
    model: &KripkeModel,
    base: &BTreeSet<Formula>,
) -> Result<(), ModelDefect> {
    ModelChecks::with_bases(core::iter::empty(), base, core::iter::empty()).identity(&mut Evaluator::new(model))
}

/// Equations `a == b` for `a, b` drawn from `formulas`.
pub fn equation_base(formulas: &BTreeSet<Formula>) -> BTreeSet<Formula> {
    let mut out = BTreeSet::new();
    for a in formulas {
        for b in formulas {
            out.insert(Formula::id(a.clone(), b.clone()));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn base(items: &[&str]) -> BTreeSet<Formula> {
        items.iter().map(|s| f(s)).collect()
    }

    fn single(values: &[(&str, bool)]) -> KripkeModel {
        let frame = Frame::new(1, [(0, 0)]).unwrap();
        let mut a = Assignment::new();
        for (name, v) in values {
            a.set(f(name), WorldSet::from_mask(1, *v as u64));
        }
        KripkeModel::new(frame, a)
    }

    #[test]
    fn frames() {
        assert!(check_frame(&Frame::new(1, [(0, 0)]).unwrap()).is_ok());
        assert!(check_frame(&Frame::new(2, [(0, 0), (1, 1), (0, 1)]).unwrap()).is_ok());
        assert_eq!(
            check_frame(&Frame::new(2, [(0, 0), (0, 1)]).unwrap()),
            Err(ModelDefect::NotReflexive(1))
        );
        let f3 = Frame::new(3, [(0, 0), (1, 1), (2, 2), (0, 1), (1, 2)]).unwrap();
        assert_eq!(check_frame(&f3), Err(ModelDefect::NotTransitive(0, 1, 2)));
        assert!(Frame::new(1, [(0, 1)]).is_none());
        let closed = Frame::closure_of(3, [(0, 1), (1, 2)]).unwrap();
        assert!(check_frame(&closed).is_ok());
        assert!(closed.leq(0, 2) && !closed.leq(2, 0));
    }

    #[test]
    fn forcing_basics() {
        let m = single(&[("p", true)]);
        assert!(forces(&m, 0, &f("p")));
        assert!(!forces(&m, 0, &f("q")));
        assert!(!forces(&m, 0, &Formula::Bottom));
        assert!(valid_in_model(&m, &f("p")));
        assert!(!valid_in_model(&m, &f("q")));
        assert!(valid_in_model(&m, &f("p == p")));
    }

    #[test]
    fn implication_witness_in_successor() {
        let frame = Frame::new(2, [(0, 0), (1, 1), (0, 1)]).unwrap();
        let mut a = Assignment::new();
        a.set(f("p"), WorldSet::from_worlds(2, [1]));
        a.set(f("q"), WorldSet::empty(2));
        let m = KripkeModel::new(frame, a);
        assert!(!forces(&m, 0, &f("p -> q")));
        assert!(forces(&m, 0, &f("q -> p")));
    }

    #[test]
    fn admissibility() {
        let m = single(&[("p == p", false)]);
        assert!(matches!(
            check_admissible(&m, &base(&["p == p"])),
            Err(ModelDefect::Reflexivity { .. })
        ));

        let m = single(&[("p == q", true), ("r == s", true), ("(p -> r) == (q -> s)", false)]);
        assert!(matches!(
            check_admissible(&m, &base(&["p == q", "r == s", "(p -> r) == (q -> s)"])),
            Err(ModelDefect::Congruence { .. })
        ));

        let m = single(&[("p == q", false), ("r == s", false)]);
        assert!(check_admissible(&m, &base(&["p == q", "r == s"])).is_ok());
    }

    #[test]
    fn decomposition_outside_base() {
        let m = single(&[("p == q", true), ("r == s", true)]);
        assert!(forces(&m, 0, &f("(p -> r) == (q -> s)")));
        assert!(forces(&m, 0, &f("(p == r) == (q == s)")));
        assert!(!forces(&m, 0, &f("(p -> r) == (q == s)")));
        assert!(forces(&m, 0, &f("(p -> r) == (p -> r)")));
    }

    #[test]
    fn monotonicity() {
        let frame = Frame::new(2, [(0, 0), (1, 1), (0, 1)]).unwrap();
        let mut a = Assignment::new();
        a.set(f("p"), WorldSet::from_worlds(2, [0]));
        let m = KripkeModel::new(frame.clone(), a);
        assert_eq!(
            check_monotonicity(&m, &base(&["p"])),
            Err(ModelDefect::Monotonicity {
                formula: f("p"),
                from: 0,
                to: 1
            })
        );
        let mut a = Assignment::new();
        a.set(f("p"), WorldSet::full(2));
        let m = KripkeModel::new(frame, a);
        assert!(check_monotonicity(&m, &base(&["p", "p -> q", "q", "p == q"])).is_ok());
    }

    #[test]
    fn identity_clause() {
        let m = single(&[("p == q", true), ("p", true), ("q", false)]);
        assert_eq!(
            check_identity_entails_implications(&m, &base(&["p == q"])),
            Err(ModelDefect::IdentityImplication {
                equation: f("p == q"),
                world: 0
            })
        );
    }
}
