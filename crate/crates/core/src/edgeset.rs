use std::fmt;
use std::ops::{BitAnd, BitOr, BitXor, Not, Sub};

/// A set of edge (or ground-element) indices, at most 64 of them.
///
/// Indices refer to the owning graph's or matroid's sorted label order, so an
/// `EdgeSet` only has meaning next to that owner.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeSet(pub u64);

impl EdgeSet {
    pub const EMPTY: EdgeSet = EdgeSet(0);

    /// The set `{0, 1, .., n-1}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= 64);
        if n >= 64 {
            EdgeSet(u64::MAX)
        } else {
            EdgeSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        EdgeSet(1u64 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        iter.into_iter().fold(EdgeSet::EMPTY, |s, i| s.with(i))
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 >> i & 1 == 1
    }

    #[inline]
    pub fn with(self, i: usize) -> Self {
        EdgeSet(self.0 | 1u64 << i)
    }

    #[inline]
    pub fn without(self, i: usize) -> Self {
        EdgeSet(self.0 & !(1u64 << i))
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn is_subset(self, other: EdgeSet) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn is_disjoint(self, other: EdgeSet) -> bool {
        self.0 & other.0 == 0
    }

    /// Smallest index in the set.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Largest index in the set.
    pub fn last(self) -> Option<usize> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros() as usize)
    }

    pub fn iter(self) -> Indices {
        Indices(self.0)
    }

    /// All `k`-element subsets of `{0, .., n-1}` in increasing numeric order
    /// (Gosper's hack).
    pub fn combinations(n: usize, k: usize) -> Combinations {
        debug_assert!(n <= 64);
        let next = if k > n {
            None
        } else if k == 0 {
            Some(0)
        } else {
            Some(EdgeSet::full(k).0)
        };
        Combinations { n, next }
    }

    /// All subsets of `self`, starting with the empty set.
    pub fn subsets(self) -> Subsets {
        Subsets {
            set: self.0,
            next: Some(0),
        }
    }
}

/// Ascending iterator over the indices of an [`EdgeSet`].
#[derive(Clone)]
pub struct Indices(u64);

impl Iterator for Indices {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Indices {}

/// Carry-rippler enumeration of all submasks.
#[derive(Clone)]
pub struct Subsets {
    set: u64,
    next: Option<u64>,
}

impl Iterator for Subsets {
    type Item = EdgeSet;

    fn next(&mut self) -> Option<EdgeSet> {
        let cur = self.next?;
        let succ = cur.wrapping_sub(self.set) & self.set;
        self.next = (succ != 0).then_some(succ);
        Some(EdgeSet(cur))
    }
}

/// See [`EdgeSet::combinations`].
#[derive(Clone)]
pub struct Combinations {
    n: usize,
    next: Option<u64>,
}

impl Iterator for Combinations {
    type Item = EdgeSet;

    fn next(&mut self) -> Option<EdgeSet> {
        let cur = self.next?;
        self.next = if cur == 0 {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let (r, overflow) = cur.overflowing_add(c);
            let succ = if overflow { 0 } else { (((r ^ cur) >> 2) / c) | r };
            (!overflow && (self.n == 64 || succ >> self.n == 0)).then_some(succ)
        };
        Some(EdgeSet(cur))
    }
}

impl IntoIterator for EdgeSet {
    type Item = usize;
    type IntoIter = Indices;

    fn into_iter(self) -> Indices {
        self.iter()
    }
}

impl FromIterator<usize> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        EdgeSet::from_indices(iter)
    }
}

impl BitOr for EdgeSet {
    type Output = EdgeSet;
    fn bitor(self, rhs: EdgeSet) -> EdgeSet {
        EdgeSet(self.0 | rhs.0)
    }
}

impl BitAnd for EdgeSet {
    type Output = EdgeSet;
    fn bitand(self, rhs: EdgeSet) -> EdgeSet {
        EdgeSet(self.0 & rhs.0)
    }
}

impl BitXor for EdgeSet {
    type Output = EdgeSet;
    fn bitxor(self, rhs: EdgeSet) -> EdgeSet {
        EdgeSet(self.0 ^ rhs.0)
    }
}

impl Sub for EdgeSet {
    type Output = EdgeSet;
    fn sub(self, rhs: EdgeSet) -> EdgeSet {
        EdgeSet(self.0 & !rhs.0)
    }
}

impl Not for EdgeSet {
    type Output = EdgeSet;
    fn not(self) -> EdgeSet {
        EdgeSet(!self.0)
    }
}

impl fmt::Debug for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_cover_power_set() {
        let s = EdgeSet::from_indices([0, 2, 4]);
        let all: Vec<u64> = s.subsets().map(|x| x.bits()).collect();
        assert_eq!(all, vec![0, 1, 4, 5, 16, 17, 20, 21]);
        assert_eq!(EdgeSet::EMPTY.subsets().count(), 1);
    }

    #[test]
    fn combinations_count() {
        assert_eq!(EdgeSet::combinations(6, 3).count(), 20);
        assert_eq!(EdgeSet::combinations(6, 0).collect::<Vec<_>>(), vec![EdgeSet::EMPTY]);
        assert_eq!(EdgeSet::combinations(6, 6).count(), 1);
        assert_eq!(EdgeSet::combinations(3, 4).count(), 0);
        assert!(EdgeSet::combinations(7, 4).all(|s| s.len() == 4 && s.bits() < 128));
    }

    #[test]
    fn full_and_bounds() {
        assert_eq!(EdgeSet::full(0), EdgeSet::EMPTY);
        assert_eq!(EdgeSet::full(3).bits(), 0b111);
        assert_eq!(EdgeSet::full(64).len(), 64);
        let s = EdgeSet::from_indices([3, 9]);
        assert_eq!(s.first(), Some(3));
        assert_eq!(s.last(), Some(9));
        assert!(!s.contains(64));
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![3, 9]);
    }
}
