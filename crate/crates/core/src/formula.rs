//! Formulas of the `{->, #, ==}` language, their complexity, and the
//! subformula / extended-subformula closures.

use alloc::collections::BTreeSet;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;

/// A binary connective.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Connective {
    Imp,
    Id,
}

impl Connective {
    pub const ALL: [Connective; 2] = [Connective::Imp, Connective::Id];

    pub fn symbol(self) -> &'static str {
        match self {
            Connective::Imp => "->",
            Connective::Id => "==",
        }
    }
}

/// A formula. Equality is purely structural: `p == q` and `q == p` are
/// different formulas.
///
/// The derived `Ord` is the canonical order used for every deterministic
/// iteration in the crate: `Bottom < Var < Imp < Id` at the root, variables
/// by name, composites lexicographically by `(left, right)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Bottom,
    Var(Arc<str>),
    Imp(Arc<Formula>, Arc<Formula>),
    Id(Arc<Formula>, Arc<Formula>),
}

/// Coarse syntactic class of a formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FormulaClass {
    Prop,
    Bottom,
    Equation,
    Implication,
}

impl FormulaClass {
    /// Variables and equations: the formulas an assignment gives values to.
    pub fn is_atomic_for_valuation(self) -> bool {
        matches!(self, FormulaClass::Prop | FormulaClass::Equation)
    }
}

impl Formula {
    pub fn var(name: &str) -> Formula {
        Formula::Var(Arc::from(name))
    }

    pub fn bottom() -> Formula {
        Formula::Bottom
    }

    pub fn imp(left: Formula, right: Formula) -> Formula {
        Formula::Imp(Arc::new(left), Arc::new(right))
    }

    pub fn id(left: Formula, right: Formula) -> Formula {
        Formula::Id(Arc::new(left), Arc::new(right))
    }

    /// `x -> #`
    pub fn negation(inner: Formula) -> Formula {
        Formula::imp(inner, Formula::Bottom)
    }

    pub fn compose(op: Connective, left: Formula, right: Formula) -> Formula {
        match op {
            Connective::Imp => Formula::imp(left, right),
            Connective::Id => Formula::id(left, right),
        }
    }

    pub fn class(&self) -> FormulaClass {
        match self {
            Formula::Bottom => FormulaClass::Bottom,
            Formula::Var(_) => FormulaClass::Prop,
            Formula::Imp(..) => FormulaClass::Implication,
            Formula::Id(..) => FormulaClass::Equation,
        }
    }

    /// Splits a composite formula into its connective and components.
    pub fn as_binary(&self) -> Option<(Connective, &Formula, &Formula)> {
        match self {
            Formula::Imp(l, r) => Some((Connective::Imp, l, r)),
            Formula::Id(l, r) => Some((Connective::Id, l, r)),
            _ => None,
        }
    }

    pub fn as_equation(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Id(l, r) => Some((l, r)),
            _ => None,
        }
    }

    pub fn as_implication(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Imp(l, r) => Some((l, r)),
            _ => None,
        }
    }

    pub fn is_equation(&self) -> bool {
        matches!(self, Formula::Id(..))
    }

    pub fn is_implication(&self) -> bool {
        matches!(self, Formula::Imp(..))
    }

    /// `x == x` for some `x`.
    pub fn is_reflexive_equation(&self) -> bool {
        matches!(self, Formula::Id(l, r) if l == r)
    }

    /// Number of binary connectives.
    pub fn complexity(&self) -> usize {
        match self {
            Formula::Bottom | Formula::Var(_) => 0,
            Formula::Imp(l, r) | Formula::Id(l, r) => l.complexity() + r.complexity() + 1,
        }
    }

    /// All subformulas, including the formula itself.
    pub fn subformulas(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        self.collect_subformulas(&mut out);
        out
    }

    fn collect_subformulas(&self, out: &mut BTreeSet<Formula>) {
        if !out.insert(self.clone()) {
            return;
        }
        if let Some((_, l, r)) = self.as_binary() {
            l.collect_subformulas(out);
            r.collect_subformulas(out);
        }
    }

    /// Propositional variables occurring in the formula.
    pub fn variables(&self) -> BTreeSet<Formula> {
        self.subformulas()
            .into_iter()
            .filter(|f| matches!(f, Formula::Var(_)))
            .collect()
    }

    /// Extended subformulas, bounded by this formula's own complexity.
    pub fn extended_subformulas(&self) -> BTreeSet<Formula> {
        extended_closure(self.subformulas(), self.complexity())
    }
}

/// Canonical total order; `Equal` iff the formulas are structurally equal.
pub fn canonical_compare(a: &Formula, b: &Formula) -> Ordering {
    a.cmp(b)
}

/// Closes `seed` under the extended-subformula rules with complexity bound
/// `bound`:
///
/// * `x` present and `c(x == x) <= bound` adds `x == x`;
/// * `x == y` present adds `x -> y` and `y -> x` (no bound);
/// * `x1 == y1`, `x2 == y2` present and the composite within the bound adds
///   `(x1 op x2) == (y1 op y2)` for both connectives.
///
/// Applied to `sub(f)` with `bound = c(f)` this is `ex.sub(f)`.
pub fn extended_closure(seed: BTreeSet<Formula>, bound: usize) -> BTreeSet<Formula> {
    let mut set = BTreeSet::new();
    // Equations already combined with each other, bucketed by complexity.
    let mut equations: Vec<Vec<Formula>> = alloc::vec![Vec::new(); bound + 1];
    let mut work: Vec<Formula> = seed.into_iter().collect();
    work.reverse();
    let mut fresh = Vec::new();
    while let Some(f) = work.pop() {
        if !set.insert(f.clone()) {
            continue;
        }
        let c = f.complexity();
        if 2 * c < bound {
            fresh.push(Formula::id(f.clone(), f.clone()));
        }
        if let Some((l1, r1)) = f.as_equation() {
            fresh.push(Formula::imp(l1.clone(), r1.clone()));
            fresh.push(Formula::imp(r1.clone(), l1.clone()));
            if c < bound {
                equations[c].push(f.clone());
                for bucket in &equations[..bound - c] {
                    for e in bucket {
                        let (l2, r2) = e.as_equation().unwrap();
                        for op in Connective::ALL {
                            fresh.push(Formula::id(
                                Formula::compose(op, l1.clone(), l2.clone()),
                                Formula::compose(op, r1.clone(), r2.clone()),
                            ));
                            fresh.push(Formula::id(
                                Formula::compose(op, l2.clone(), l1.clone()),
                                Formula::compose(op, r2.clone(), r1.clone()),
                            ));
                        }
                    }
                }
            }
        }
        work.extend(fresh.drain(..).filter(|g| !set.contains(g)));
    }
    set
}
