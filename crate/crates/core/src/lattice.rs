//! Finite sets of integer lattice vectors.
//!
//! The canonical ascending lexicographic order of a [`LatticeSet`] is a
//! contract, not a convenience: transition matrices are indexed by it, so
//! every downstream matrix is bit-reproducible.

use std::collections::BTreeSet;

pub type Point = Vec<i64>;

/// A finite set of integer n-vectors in canonical (ascending lexicographic)
/// order, without duplicates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeSet {
    dim: usize,
    points: Vec<Point>,
}

impl LatticeSet {
    pub fn new(dim: usize, points: impl IntoIterator<Item = Point>) -> Self {
        let set: BTreeSet<Point> = points
            .into_iter()
            .inspect(|p| assert_eq!(p.len(), dim, "point dimension mismatch"))
            .collect();
        Self {
            dim,
            points: set.into_iter().collect(),
        }
    }

    pub fn empty(dim: usize) -> Self {
        Self {
            dim,
            points: Vec::new(),
        }
    }

    pub fn singleton(point: Point) -> Self {
        let dim = point.len();
        Self {
            dim,
            points: vec![point],
        }
    }

    /// 1-D helper: the set `{lo, .., hi}` of scalars.
    pub fn scalar_range(lo: i64, hi: i64) -> Self {
        Self {
            dim: 1,
            points: (lo..=hi).map(|x| vec![x]).collect(),
        }
    }

    pub fn scalars(values: impl IntoIterator<Item = i64>) -> Self {
        Self::new(1, values.into_iter().map(|x| vec![x]))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.points.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    #[inline]
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn iter(&self) -> impl Iterator<Item = &Point> {
        self.points.iter()
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        self.index_of(p).is_some()
    }

    /// Position of `p` in the canonical order.
    pub fn index_of(&self, p: &[i64]) -> Option<usize> {
        self.points.binary_search_by(|q| q.as_slice().cmp(p)).ok()
    }

    pub fn is_subset_of(&self, other: &LatticeSet) -> bool {
        self.points.iter().all(|p| other.contains(p))
    }

    pub fn union(&self, other: &LatticeSet) -> LatticeSet {
        assert_eq!(self.dim, other.dim);
        LatticeSet::new(
            self.dim,
            self.points.iter().chain(other.points.iter()).cloned(),
        )
    }

    pub fn with_point(&self, p: Point) -> LatticeSet {
        assert_eq!(p.len(), self.dim);
        LatticeSet::new(self.dim, self.points.iter().cloned().chain([p]))
    }
}

impl<'a> IntoIterator for &'a LatticeSet {
    type Item = &'a Point;
    type IntoIter = std::slice::Iter<'a, Point>;
    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_and_dedup() {
        let s = LatticeSet::new(2, vec![vec![1, 0], vec![0, 1], vec![1, 0], vec![-1, 2]]);
        assert_eq!(s.len(), 3);
        assert_eq!(
            s.points(),
            &[vec![-1i64, 2], vec![0, 1], vec![1, 0]] as &[Vec<i64>]
        );
        assert_eq!(s.index_of(&[0, 1]), Some(1));
        assert_eq!(s.index_of(&[5, 5]), None);
    }

    #[test]
    fn scalar_helpers() {
        let s = LatticeSet::scalar_range(-1, 2);
        assert_eq!(s.len(), 4);
        assert!(s.contains(&[-1]));
        assert!(s.contains(&[2]));
        assert_eq!(s.dim(), 1);
    }
}
