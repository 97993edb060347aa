//! Brute-force countermodel search over small frames.
//!
//! Preorders on `1..=k` worlds are enumerated in increasing order of their
//! pair bitmaps (bit `i*m + j` set iff `i <= j`), keeping the least
//! bitmap of each isomorphism class. Assignments range over the variables
//! of the formula and the equations of its extended subformulas, as
//! up-closed world sets. Reflexive equations are fixed to true.
//!
//! Atoms are assigned in order of complexity, so when an equation is
//! reached its components and both sides are already valued. Its value is
//! then confined to the upsets between the meet of its components
//! (congruence) and the worlds forcing both of its implications (identity
//! clause). An atom that occurs in no other checked formula and not in the
//! goal only needs one witness, the lower bound. Candidates that refute the
//! goal must still pass every model check before being returned.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::{Assignment, Evaluator, Frame, KripkeModel, ModelChecks, World, WorldSet};
use crate::formula::Formula;

pub const DEFAULT_ORACLE_WORLDS: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleHit {
    pub model: KripkeModel,
    pub world: World,
}

/// Search statistics alongside the result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleSearch {
    pub hit: Option<OracleHit>,
    pub frames: u64,
    pub models: u64,
}

struct Atom {
    formula: Formula,
    /// Component equations, when both are in the base.
    components: Option<(Formula, Formula)>,
    /// Both implications, for equations.
    implications: Option<(Formula, Formula)>,
    leaf: bool,
}

struct Space<'a> {
    formula: &'a Formula,
    atoms: &'a [Atom],
    checks: &'a ModelChecks,
    frame: Frame,
    upsets: Vec<u64>,
    models: u64,
}

/// First checked model (in enumeration order) with a world not forcing
/// `formula`, using at most `max_worlds` worlds. `None` means the bounded
/// space is exhausted, not that the formula is valid.
pub fn bounded_countermodel_search(formula: &Formula, max_worlds: usize) -> OracleSearch {
    assert!(max_worlds <= 6, "oracle is meant for desk-scale frames");
    let exsub = formula.extended_subformulas();
    let sub = formula.subformulas();
    let base: BTreeSet<Formula> = exsub
        .iter()
        .filter(|f| f.class().is_atomic_for_valuation())
        .cloned()
        .collect();
    let equations: BTreeSet<Formula> = base.iter().filter(|f| f.is_equation()).cloned().collect();
    let mut inner = BTreeSet::new();
    for f in &exsub {
        if let Some((_, l, r)) = f.as_binary() {
            inner.extend(l.subformulas());
            inner.extend(r.subformulas());
        }
    }
    let mut atoms: Vec<Atom> = base
        .iter()
        .filter(|f| !f.is_reflexive_equation())
        .map(|f| {
            let eq = f.as_equation();
            let components = eq
                .and_then(|(l, r)| match (l.as_binary(), r.as_binary()) {
                    (Some((o1, a1, a2)), Some((o2, b1, b2))) if o1 == o2 => Some((
                        Formula::id(a1.clone(), b1.clone()),
                        Formula::id(a2.clone(), b2.clone()),
                    )),
                    _ => None,
                })
                .filter(|(e1, e2)| equations.contains(e1) && equations.contains(e2));
            Atom {
                formula: f.clone(),
                components,
                implications: eq.map(|(l, r)| {
                    (Formula::imp(l.clone(), r.clone()), Formula::imp(r.clone(), l.clone()))
                }),
                leaf: !sub.contains(f) && !inner.contains(f),
            }
        })
        .collect();
    atoms.sort_by(|a, b| {
        (a.formula.complexity(), &a.formula).cmp(&(b.formula.complexity(), &b.formula))
    });
    let reflexive: Vec<Formula> = base
        .iter()
        .filter(|f| f.is_reflexive_equation())
        .cloned()
        .collect();
    let checks = ModelChecks::new(&equations, &exsub);

    let mut out = OracleSearch {
        hit: None,
        frames: 0,
        models: 0,
    };
    for m in 1..=max_worlds {
        for frame in preorders(m) {
            out.frames += 1;
            let mut assignment = Assignment::new();
            for r in &reflexive {
                assignment.set(r.clone(), WorldSet::full(m));
            }
            let mut space = Space {
                formula,
                atoms: &atoms,
                checks: &checks,
                upsets: up_closed_sets(&frame),
                frame,
                models: 0,
            };
            let hit = space.assign(0, assignment);
            out.models += space.models;
            if hit.is_some() {
                out.hit = hit;
                return out;
            }
        }
    }
    out
}

impl Space<'_> {
    fn model(&self, assignment: Assignment) -> KripkeModel {
        KripkeModel::new(self.frame.clone(), assignment)
    }

    fn assign(&mut self, i: usize, assignment: Assignment) -> Option<OracleHit> {
        let m = self.frame.size();
        let Some(atom) = self.atoms.get(i) else {
            let model = self.model(assignment);
            self.models += 1;
            let truth = Evaluator::new(&model).truth(self.formula);
            let world = (0..m).find(|w| !truth.contains(*w))?;
            return self.checks.run(&model).is_ok().then_some(OracleHit { model, world });
        };
        let lower = match &atom.components {
            Some((e1, e2)) => {
                let mut s = assignment.truth(e1, m);
                s.intersect_with(&assignment.truth(e2, m));
                s
            }
            None => WorldSet::empty(m),
        };
        let upper = match &atom.implications {
            Some((fwd, bwd)) => {
                let model = self.model(assignment.clone());
                let mut ev = Evaluator::new(&model);
                let mut s = ev.truth(fwd);
                s.intersect_with(&ev.truth(bwd));
                s
            }
            None => WorldSet::full(m),
        };
        if !lower.is_subset(&upper) {
            return None;
        }
        if atom.leaf {
            let mut next = assignment;
            next.set(atom.formula.clone(), lower);
            return self.assign(i + 1, next);
        }
        for k in 0..self.upsets.len() {
            let value = WorldSet::from_mask(m, self.upsets[k]);
            if !lower.is_subset(&value) || !value.is_subset(&upper) {
                continue;
            }
            let mut next = assignment.clone();
            next.set(atom.formula.clone(), value);
            if let Some(hit) = self.assign(i + 1, next) {
                return Some(hit);
            }
        }
        None
    }
}

fn preorders(m: usize) -> Vec<Frame> {
    let off_diagonal: Vec<usize> = (0..m * m).filter(|b| b / m != b % m).collect();
    let diagonal: u64 = (0..m).map(|i| 1u64 << (i * m + i)).sum();
    let perms = permutations(m);
    let mut out = Vec::new();
    for bits in 0u64..(1 << off_diagonal.len()) {
        let mut rel = diagonal;
        for (k, pos) in off_diagonal.iter().enumerate() {
            if bits & (1 << k) != 0 {
                rel |= 1 << pos;
            }
        }
        if !transitive(rel, m) {
            continue;
        }
        if perms.iter().any(|p| permute(rel, m, p) < rel) {
            continue;
        }
        let pairs = (0..m * m).filter(|b| rel & (1 << b) != 0).map(|b| (b / m, b % m));
        out.push(Frame::new(m, pairs).unwrap());
    }
    // Bits of `rel` are scattered from `bits` in position order, so the
    // loop already visits relations in increasing bitmap order.
    out
}

fn transitive(rel: u64, m: usize) -> bool {
    let leq = |i: usize, j: usize| rel & (1 << (i * m + j)) != 0;
    (0..m).all(|i| (0..m).all(|j| !leq(i, j) || (0..m).all(|k| !leq(j, k) || leq(i, k))))
}

fn permute(rel: u64, m: usize, p: &[usize]) -> u64 {
    let mut out = 0;
    for b in 0..m * m {
        if rel & (1 << b) != 0 {
            out |= 1 << (p[b / m] * m + p[b % m]);
        }
    }
    out
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return alloc::vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in permutations(m - 1) {
        for pos in 0..=rest.len() {
            let mut p = rest.clone();
            p.insert(pos, m - 1);
            out.push(p);
        }
    }
    out.sort();
    out
}

/// Up-closed subsets as bitmasks, ascending.
fn up_closed_sets(frame: &Frame) -> Vec<u64> {
    let m = frame.size();
    (0u64..(1 << m))
        .filter(|mask| {
            (0..m)
                .filter(|w| mask & (1 << w) != 0)
                .all(|w| frame.successors(w).iter().all(|v| mask & (1 << v) != 0))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::check_frame;
    use crate::syntax::parse_formula;

    #[test]
    fn preorder_counts_up_to_isomorphism() {
        // Non-isomorphic preorders on 1, 2, 3, 4 points (OEIS A000798 up to
        // isomorphism: A001930).
        let counts: Vec<usize> = (1..=4).map(|m| preorders(m).len()).collect();
        assert_eq!(counts, alloc::vec![1, 3, 9, 33]);
        for m in 1..=3 {
            for f in preorders(m) {
                assert!(check_frame(&f).is_ok());
            }
        }
    }

    #[test]
    fn up_sets_of_chain() {
        let chain = Frame::closure_of(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(up_closed_sets(&chain), alloc::vec![0b000, 0b100, 0b110, 0b111]);
    }

    #[test]
    fn variable_refuted_on_one_world() {
        let r = bounded_countermodel_search(&parse_formula("p").unwrap(), 1);
        let hit = r.hit.unwrap();
        assert_eq!(hit.model.size(), 1);
    }

    #[test]
    fn reflexive_identity_never_refuted() {
        let r = bounded_countermodel_search(&parse_formula("p == p").unwrap(), 3);
        assert!(r.hit.is_none());
    }

    #[test]
    fn peirce_refuted_within_three_worlds() {
        let r = bounded_countermodel_search(&parse_formula("((p -> q) -> p) -> p").unwrap(), 3);
        let hit = r.hit.unwrap();
        assert!(hit.model.size() <= 3);
        assert!(!crate::semantics::forces(
            &hit.model,
            hit.world,
            &parse_formula("((p -> q) -> p) -> p").unwrap()
        ));
    }
}
