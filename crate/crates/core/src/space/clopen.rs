use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Serialize, Serializer};

/// A subset of the points of a space. At finite scale every subset is
/// clopen, so this is also an element of the Boolean algebra.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ClopenSet {
    bits: FixedBitSet,
}

impl ClopenSet {
    pub fn empty(universe: usize) -> Self {
        Self { bits: FixedBitSet::with_capacity(universe) }
    }

    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        Self { bits }
    }

    /// Panics if an index is outside the universe.
    pub fn from_indices(universe: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut set = Self::empty(universe);
        for i in indices {
            set.insert(i);
        }
        set
    }

    /// Number of points of the ambient space.
    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    /// Number of members.
    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn is_full(&self) -> bool {
        self.bits.is_full()
    }

    pub fn contains(&self, point: usize) -> bool {
        self.bits.contains(point)
    }

    pub fn insert(&mut self, point: usize) {
        assert!(point < self.universe(), "point {point} outside a space of {} points", self.universe());
        self.bits.insert(point);
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn union(&self, other: &Self) -> Self {
        debug_assert_eq!(self.universe(), other.universe());
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        Self { bits }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        debug_assert_eq!(self.universe(), other.universe());
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        Self { bits }
    }

    pub fn difference(&self, other: &Self) -> Self {
        debug_assert_eq!(self.universe(), other.universe());
        let mut bits = self.bits.clone();
        bits.difference_with(&other.bits);
        Self { bits }
    }

    pub fn complement(&self) -> Self {
        let mut bits = self.bits.clone();
        bits.toggle_range(..);
        Self { bits }
    }

    pub fn union_with(&mut self, other: &Self) {
        self.bits.union_with(&other.bits);
    }

    pub fn intersect_with(&mut self, other: &Self) {
        self.bits.intersect_with(&other.bits);
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.bits.is_disjoint(&other.bits)
    }

    /// Least member of `self \ other`.
    pub fn first_outside(&self, other: &Self) -> Option<usize> {
        self.bits.difference(&other.bits).next()
    }
}

impl fmt::Debug for ClopenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Serialized as the sorted array of member indices.
impl Serialize for ClopenSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boolean_operations() {
        let a = ClopenSet::from_indices(6, [0, 2, 4]);
        let b = ClopenSet::from_indices(6, [2, 3]);
        assert_eq!(a.union(&b).to_vec(), vec![0, 2, 3, 4]);
        assert_eq!(a.intersection(&b).to_vec(), vec![2]);
        assert_eq!(a.difference(&b).to_vec(), vec![0, 4]);
        assert_eq!(a.complement().to_vec(), vec![1, 3, 5]);
        assert!(a.complement().complement() == a);
        assert!(ClopenSet::full(6).is_full());
        assert_eq!(ClopenSet::full(6).len(), 6);
        assert!(ClopenSet::empty(6).is_empty());
        assert_eq!(a.first_outside(&b), Some(0));
        assert!(a.intersection(&b).is_subset(&a));
        assert_eq!(serde_json::to_string(&a).unwrap(), "[0,2,4]");
    }

    #[test]
    fn complement_respects_universe() {
        let empty = ClopenSet::empty(3);
        assert_eq!(empty.complement().to_vec(), vec![0, 1, 2]);
        assert_eq!(ClopenSet::full(0).len(), 0);
    }
}
