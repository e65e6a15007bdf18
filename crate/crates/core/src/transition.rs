//! Transition matrices of the attractor refinement equation.
//!
//! For a 0/1 mask supported on the digit set, the matrix for basic digit
//! `delta` has `(T_delta)_{a b} = 1` iff `M a - b + delta` is a digit. Each
//! column carries exactly one 1 (the digits form a complete residue system),
//! so a matrix is stored as its column-to-row map.

use crate::attractor::{AttractorError, DilationSystem};
use crate::lattice::{LatticeSet, Point};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TransitionError {
    #[error(transparent)]
    Attractor(#[from] AttractorError),
    #[error("set is not invariant: column {column:?} maps to {image:?} outside the set")]
    NotInvariant { column: Point, image: Point },
    #[error("digit residue uniqueness violated at column {column:?} ({hits} matches)")]
    ResidueClash { column: Point, hits: usize },
}

/// A 0/1 matrix with exactly one 1 per column; `col_to_row[j]` is the row
/// of the 1 in column `j`. Encodes a total map on `{0, .., n-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleMatrix {
    n: usize,
    col_to_row: Vec<usize>,
}

impl SimpleMatrix {
    pub fn new(col_to_row: Vec<usize>) -> Self {
        let n = col_to_row.len();
        assert!(col_to_row.iter().all(|&r| r < n), "row index out of range");
        Self { n, col_to_row }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n,
            col_to_row: (0..n).collect(),
        }
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.n
    }

    /// Row of the unit entry in column `j`.
    #[inline]
    pub fn map(&self, j: usize) -> usize {
        self.col_to_row[j]
    }

    #[inline]
    pub fn col_to_row(&self) -> &[usize] {
        &self.col_to_row
    }

    /// `self * other` (composition of column maps).
    pub fn compose(&self, other: &SimpleMatrix) -> SimpleMatrix {
        assert_eq!(self.n, other.n);
        SimpleMatrix {
            n: self.n,
            col_to_row: other.col_to_row.iter().map(|&r| self.col_to_row[r]).collect(),
        }
    }

    pub fn is_permutation(&self) -> bool {
        let mut seen = vec![false; self.n];
        for &r in &self.col_to_row {
            if seen[r] {
                return false;
            }
            seen[r] = true;
        }
        true
    }

    /// Dense 0/1 form, row-major.
    pub fn to_dense(&self) -> Vec<Vec<u8>> {
        let mut rows = vec![vec![0u8; self.n]; self.n];
        for (j, &r) in self.col_to_row.iter().enumerate() {
            rows[r][j] = 1;
        }
        rows
    }

    /// Image of a set of states given as a bitmask (state `i` = bit `i`).
    pub fn apply_mask(&self, mask: u64) -> u64 {
        let mut out = 0u64;
        let mut rest = mask;
        while rest != 0 {
            let j = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            out |= 1u64 << self.col_to_row[j];
        }
        out
    }
}

/// The `m` transition matrices of a system over an invariant index set `S`,
/// in basic-digit order.
#[derive(Debug, Clone)]
pub struct TransitionFamily {
    set: LatticeSet,
    mats: Vec<SimpleMatrix>,
}

impl TransitionFamily {
    pub fn set(&self) -> &LatticeSet {
        &self.set
    }

    pub fn mats(&self) -> &[SimpleMatrix] {
        &self.mats
    }

    /// `N = |S|`.
    pub fn size(&self) -> usize {
        self.set.len()
    }

    /// Number of matrices (= number of digits).
    pub fn arity(&self) -> usize {
        self.mats.len()
    }

    pub fn from_parts(set: LatticeSet, mats: Vec<SimpleMatrix>) -> Self {
        assert!(mats.iter().all(|t| t.size() == set.len()));
        Self { set, mats }
    }
}

/// Build the transition family of `sys` over the invariant set `s`.
///
/// For each column `b` and digit `delta` there is exactly one attractor
/// digit `d` with `M a = b + d - delta` solvable over the integers; the
/// solution `a` must land in `s`, otherwise `s` was not invariant.
pub fn transition_matrices(
    sys: &DilationSystem,
    s: &LatticeSet,
) -> Result<TransitionFamily, TransitionError> {
    let dim = sys.dim();
    assert_eq!(s.dim(), dim);
    let solver = sys.solver()?;
    let mut mats = Vec::with_capacity(sys.basic_digits().len());
    for delta in sys.basic_digits().iter() {
        let mut col_to_row = Vec::with_capacity(s.len());
        for b in s.iter() {
            let mut found: Option<Point> = None;
            let mut hits = 0usize;
            for d in sys.digits().iter() {
                let v: Vec<i64> = (0..dim)
                    .map(|t| {
                        b[t].checked_add(d[t])
                            .and_then(|x| x.checked_sub(delta[t]))
                            .ok_or(crate::algebra::AlgebraError::Overflow)
                    })
                    .collect::<Result<_, _>>()
                    .map_err(AttractorError::from)?;
                if let Some(a) = solver.solve_integer(&v).map_err(AttractorError::from)? {
                    hits += 1;
                    found = Some(a);
                }
            }
            if hits != 1 {
                return Err(TransitionError::ResidueClash {
                    column: b.clone(),
                    hits,
                });
            }
            let a = found.unwrap();
            let row = s.index_of(&a).ok_or_else(|| TransitionError::NotInvariant {
                column: b.clone(),
                image: a.clone(),
            })?;
            col_to_row.push(row);
        }
        mats.push(SimpleMatrix::new(col_to_row));
    }
    Ok(TransitionFamily {
        set: s.clone(),
        mats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::IntMatrix;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn ex20() -> DilationSystem {
        DilationSystem::new(
            m(&[&[3]]),
            vec![vec![0], vec![1], vec![5]],
            None,
            Some("ex20".into()),
        )
        .unwrap()
    }

    #[test]
    fn three_digit_tile_matrices_match_printed_values() {
        let sys = ex20();
        let s = LatticeSet::scalars([0, 1, 2]);
        let fam = transition_matrices(&sys, &s).unwrap();
        assert_eq!(fam.arity(), 3);
        // columns 0,1,2 map to rows (0,2,1), (0,0,2), (1,0,0)
        assert_eq!(fam.mats()[0].col_to_row(), &[0, 2, 1]);
        assert_eq!(fam.mats()[1].col_to_row(), &[0, 0, 2]);
        assert_eq!(fam.mats()[2].col_to_row(), &[1, 0, 0]);
        // dense forms, entry for entry
        assert_eq!(
            fam.mats()[0].to_dense(),
            vec![vec![1, 0, 0], vec![0, 0, 1], vec![0, 1, 0]]
        );
        assert_eq!(
            fam.mats()[1].to_dense(),
            vec![vec![1, 1, 0], vec![0, 0, 0], vec![0, 0, 1]]
        );
        assert_eq!(
            fam.mats()[2].to_dense(),
            vec![vec![0, 1, 1], vec![1, 0, 0], vec![0, 0, 0]]
        );
    }

    #[test]
    fn one_state_family() {
        let sys = DilationSystem::new(m(&[&[2]]), vec![vec![0], vec![1]], None, None).unwrap();
        let s = LatticeSet::scalars([0]);
        let fam = transition_matrices(&sys, &s).unwrap();
        assert_eq!(fam.size(), 1);
        assert_eq!(fam.mats()[0].col_to_row(), &[0]);
        assert_eq!(fam.mats()[1].col_to_row(), &[0]);
    }

    #[test]
    fn dragon_family_is_simple() {
        let sys = DilationSystem::new(
            m(&[&[1, 1], &[-1, 1]]),
            vec![vec![0, 0], vec![1, 0]],
            None,
            None,
        )
        .unwrap();
        let s = crate::attractor::admissible_set(&sys).unwrap();
        let fam = transition_matrices(&sys, &s).unwrap();
        assert_eq!(fam.arity(), 2);
        for t in fam.mats() {
            assert_eq!(t.size(), s.len());
            // column sums are 1 by construction; cross-check the dense form
            let dense = t.to_dense();
            for j in 0..t.size() {
                let col_sum: u8 = (0..t.size()).map(|i| dense[i][j]).sum();
                assert_eq!(col_sum, 1);
            }
        }
    }

    #[test]
    fn non_invariant_set_is_rejected() {
        let sys = ex20();
        // {0,1} leaks: column 1 under delta=0 maps to 2
        let s = LatticeSet::scalars([0, 1]);
        assert!(matches!(
            transition_matrices(&sys, &s),
            Err(TransitionError::NotInvariant { .. })
        ));
    }

    #[test]
    fn compose_and_mask() {
        let a = SimpleMatrix::new(vec![0, 2, 1]);
        let b = SimpleMatrix::new(vec![1, 1, 0]);
        // (a*b)(j) = a(b(j))
        assert_eq!(a.compose(&b).col_to_row(), &[2, 2, 0]);
        assert_eq!(a.apply_mask(0b110), 0b110);
        assert_eq!(b.apply_mask(0b111), 0b011);
        assert!(a.is_permutation());
        assert!(!b.is_permutation());
    }
}
