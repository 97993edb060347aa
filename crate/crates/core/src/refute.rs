//! Cheap one-world refutations of sequents.
//!
//! A single world is an ISCI model when its equations are read either as
//! material equivalence, or as membership in a congruence `~` on formulas
//! whose related formulas always get equal values. A sequent refuted by
//! such a world is unprovable, so the search can drop it at once.
//!
//! For the second reading `~` is the least congruence containing the
//! antecedent equations. It is decided exactly by congruence closure over
//! the subterms of the sequent. It respects values as soon as every
//! antecedent equation relates two formulas of equal value: the other pairs
//! of `~` arise by composition, and composition preserves that.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::calculus::Sequent;
use crate::formula::Formula;

/// Sequents with more variables than this are not tried.
const MAX_VARIABLES: usize = 10;

#[derive(Clone, Copy)]
enum Node {
    Bottom,
    Var(usize),
    Imp(usize, usize),
    Id(usize, usize),
}

/// Subterms of a sequent, children before parents.
struct Terms {
    nodes: Vec<Node>,
    ids: BTreeMap<Formula, usize>,
    variables: usize,
}

impl Terms {
    fn intern(&mut self, f: &Formula) -> usize {
        if let Some(&id) = self.ids.get(f) {
            return id;
        }
        let node = match f {
            Formula::Bottom => Node::Bottom,
            Formula::Var(_) => {
                self.variables += 1;
                Node::Var(self.variables - 1)
            }
            Formula::Imp(l, r) => Node::Imp(self.intern(l), self.intern(r)),
            Formula::Id(l, r) => Node::Id(self.intern(l), self.intern(r)),
        };
        self.nodes.push(node);
        self.ids.insert(f.clone(), self.nodes.len() - 1);
        self.nodes.len() - 1
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Class representatives of the least congruence on `terms` containing
/// `pairs`.
fn congruence(terms: &Terms, pairs: &[(usize, usize)]) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..terms.nodes.len()).collect();
    for &(a, b) in pairs {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
    }
    loop {
        let mut changed = false;
        let mut signatures: BTreeMap<(bool, usize, usize), usize> = BTreeMap::new();
        for (t, node) in terms.nodes.iter().enumerate() {
            let key = match *node {
                Node::Imp(l, r) => (false, find(&mut parent, l), find(&mut parent, r)),
                Node::Id(l, r) => (true, find(&mut parent, l), find(&mut parent, r)),
                _ => continue,
            };
            match signatures.get(&key) {
                Some(&u) => {
                    let (rt, ru) = (find(&mut parent, t), find(&mut parent, u));
                    if rt != ru {
                        parent[rt] = ru;
                        changed = true;
                    }
                }
                None => {
                    signatures.insert(key, t);
                }
            }
        }
        if !changed {
            break;
        }
    }
    (0..terms.nodes.len()).map(|t| find(&mut parent, t)).collect()
}

/// Values of all terms under `vars`, with equations decided by `eq`.
fn evaluate(terms: &Terms, vars: u32, eq: impl Fn(usize, usize, &[bool]) -> bool) -> Vec<bool> {
    let mut val: Vec<bool> = Vec::with_capacity(terms.nodes.len());
    for node in &terms.nodes {
        let v = match *node {
            Node::Bottom => false,
            Node::Var(i) => vars & (1 << i) != 0,
            Node::Imp(l, r) => !val[l] || val[r],
            Node::Id(l, r) => eq(l, r, &val),
        };
        val.push(v);
    }
    val
}

/// Whether some one-world model of either kind forces every antecedent
/// formula of `s` and not its succedent.
pub fn refuted_by_one_world(s: &Sequent) -> bool {
    let mut terms = Terms {
        nodes: Vec::new(),
        ids: BTreeMap::new(),
        variables: 0,
    };
    let antecedent: Vec<usize> = s.antecedent.iter().map(|f| terms.intern(f)).collect();
    let succedent = terms.intern(&s.succedent);
    if terms.variables > MAX_VARIABLES {
        return false;
    }
    let equations: Vec<(usize, usize)> = antecedent
        .iter()
        .filter_map(|&t| match terms.nodes[t] {
            Node::Id(l, r) => Some((l, r)),
            _ => None,
        })
        .collect();
    let class = congruence(&terms, &equations);

    let refutes = |val: &[bool]| antecedent.iter().all(|&t| val[t]) && !val[succedent];
    (0..1u32 << terms.variables).any(|vars| {
        let material = evaluate(&terms, vars, |l, r, val| val[l] == val[r]);
        if refutes(&material) {
            return true;
        }
        let congruent = evaluate(&terms, vars, |l, r, _| class[l] == class[r]);
        refutes(&congruent) && equations.iter().all(|&(l, r)| congruent[l] == congruent[r])
    })
}
