use alloc::vec;
use alloc::vec::Vec;

/// A set of worlds `0..n` as a bitset.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WorldSet {
    words: Vec<u64>,
}

impl WorldSet {
    pub fn empty(n: usize) -> WorldSet {
        WorldSet {
            words: vec![0; n.div_ceil(64)],
        }
    }

    pub fn full(n: usize) -> WorldSet {
        let mut s = WorldSet::empty(n);
        for w in 0..n {
            s.insert(w);
        }
        s
    }

    pub fn from_worlds(n: usize, worlds: impl IntoIterator<Item = usize>) -> WorldSet {
        let mut s = WorldSet::empty(n);
        for w in worlds {
            s.insert(w);
        }
        s
    }

    /// Worlds whose bit is set in `mask` (for `n <= 64`).
    pub fn from_mask(n: usize, mask: u64) -> WorldSet {
        let mut s = WorldSet::empty(n);
        if n > 0 {
            s.words[0] = if n >= 64 { mask } else { mask & ((1u64 << n) - 1) };
        }
        s
    }

    pub fn insert(&mut self, w: usize) {
        self.words[w / 64] |= 1 << (w % 64);
    }

    pub fn remove(&mut self, w: usize) {
        self.words[w / 64] &= !(1 << (w % 64));
    }

    pub fn contains(&self, w: usize) -> bool {
        self.words
            .get(w / 64)
            .is_some_and(|word| word & (1 << (w % 64)) != 0)
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn is_subset(&self, other: &WorldSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    /// `self ∩ other ⊆ rhs`
    pub fn meet_within(&self, other: &WorldSet, rhs: &WorldSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .zip(&rhs.words)
            .all(|((a, b), c)| a & b & !c == 0)
    }

    pub fn intersect_with(&mut self, other: &WorldSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn union_with(&mut self, other: &WorldSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, word)| {
            (0..64).filter_map(move |b| (word & (1 << b) != 0).then_some(i * 64 + b))
        })
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}
