//! The eigenvalue route to regularity.
//!
//! Column-stochastic families leave the zero-sum hyperplane `W` invariant.
//! Restricting to the difference basis `e_i = u_i - u_{i+1}` gives small
//! integer matrices `A_delta`; the 2-radius of the family is the square root
//! of the Perron eigenvalue of the lifted operator
//! `X -> (1/m) sum A_delta^T X A_delta` on symmetric matrices, and for
//! simple-matrix families the 1-radius equals that same eigenvalue. The
//! combinatorial program [`collapse_counts`] recovers it independently by
//! exact word counting, which is the cross-check used throughout the tests.

use crate::attractor::{admissible_set, AttractorError, DilationSystem};
use crate::lattice::LatticeSet;
use crate::oracle::{self, OracleError, TileCheck};
use crate::transition::{transition_matrices, SimpleMatrix, TransitionError, TransitionFamily};
use nalgebra::DMatrix;
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use std::collections::HashMap;
use thiserror::Error;

/// Dense operators above this size are refused (the lifted operator of an
/// N-point set has dimension N(N-1)/2).
pub const MAX_DENSE_DIM: usize = 1000;

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("anisotropic dilation matrix (q = {q} modulus groups): exact surface regularity requires the difference subspaces, which are out of scope")]
    Unsupported { q: usize },
    #[error(transparent)]
    Attractor(#[from] AttractorError),
    #[error(transparent)]
    Transition(#[from] TransitionError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("eigenvalue iteration did not converge for a {dim}x{dim} operator")]
    NoConvergence { dim: usize },
    #[error("operator dimension {dim} exceeds the cap {MAX_DENSE_DIM}")]
    TooLarge { dim: usize },
}

/// Integer matrices `A_delta = T_delta|_W` in the difference basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictedFamily {
    dim: usize,
    mats: Vec<Vec<i64>>, // row-major dim x dim
}

impl RestrictedFamily {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn arity(&self) -> usize {
        self.mats.len()
    }

    pub fn mats(&self) -> &[Vec<i64>] {
        &self.mats
    }

    pub fn entry(&self, t: usize, i: usize, j: usize) -> i64 {
        self.mats[t][i * self.dim + j]
    }
}

/// Restrict a family of simple matrices to the zero-sum hyperplane in the
/// basis `e_i = u_i - u_{i+1}`. A simple matrix sends `e_i` to
/// `u_{map(i)} - u_{map(i+1)}`, which expands to a contiguous run of +-1.
pub fn restrict_simple(mats: &[SimpleMatrix]) -> RestrictedFamily {
    assert!(!mats.is_empty());
    let n = mats[0].size();
    let dim = n - 1;
    let restricted = mats
        .iter()
        .map(|t| {
            assert_eq!(t.size(), n);
            let mut a = vec![0i64; dim * dim];
            for col in 0..dim {
                let ra = t.map(col);
                let rb = t.map(col + 1);
                if ra < rb {
                    for row in ra..rb {
                        a[row * dim + col] += 1;
                    }
                } else {
                    for row in rb..ra {
                        a[row * dim + col] -= 1;
                    }
                }
            }
            a
        })
        .collect();
    RestrictedFamily {
        dim,
        mats: restricted,
    }
}

/// Restriction of a transition family to `W`. `N = 1` yields the empty
/// zero-dimensional family.
pub fn restrict_to_w(fam: &TransitionFamily) -> RestrictedFamily {
    restrict_simple(fam.mats())
}

/// Dense form of `X -> (1/m) sum_t A_t^T X A_t` on symmetric `d x d`
/// matrices. Coordinates are ordered diagonal-first
/// `(X_11, .., X_dd, X_12, X_13, .., X_{d-1,d})`, each off-diagonal
/// coordinate carrying the entry value itself.
#[derive(Debug, Clone)]
pub struct LiftedOperator {
    pub d: usize,
    pub dim_sym: usize,
    pub arity: usize,
    mat: Vec<f64>, // row-major dim_sym x dim_sym
}

impl LiftedOperator {
    pub fn matrix(&self) -> &[f64] {
        &self.mat
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.mat[i * self.dim_sym + j]
    }
}

fn sym_coords(d: usize) -> Vec<(usize, usize)> {
    let mut coords: Vec<(usize, usize)> = (0..d).map(|i| (i, i)).collect();
    for i in 0..d {
        for j in i + 1..d {
            coords.push((i, j));
        }
    }
    coords
}

pub fn lift_operator(res: &RestrictedFamily) -> LiftedOperator {
    let d = res.dim();
    assert!(d >= 1, "lift needs a nonzero-dimensional family");
    let m = res.arity();
    let coords = sym_coords(d);
    let dim_sym = coords.len();
    let mut mat = vec![0.0f64; dim_sym * dim_sym];
    for (col, &(a, b)) in coords.iter().enumerate() {
        // Y = sum_t A_t^T X A_t for X the unit symmetric matrix at (a,b)
        let mut y = vec![0i64; d * d];
        for t in 0..m {
            for i in 0..d {
                let ai = res.entry(t, a, i);
                let bi = res.entry(t, b, i);
                for j in 0..d {
                    let aj = res.entry(t, a, j);
                    let bj = res.entry(t, b, j);
                    y[i * d + j] += if a == b { ai * aj } else { ai * bj + bi * aj };
                }
            }
        }
        for (row, &(i, j)) in coords.iter().enumerate() {
            mat[row * dim_sym + col] = y[i * d + j] as f64 / m as f64;
        }
    }
    LiftedOperator {
        d,
        dim_sym,
        arity: m,
        mat,
    }
}

/// Spectral radius of a dense real matrix via Schur decomposition; correct
/// for complex and non-simple dominant eigenvalues.
pub fn spectral_radius_dense(mat: &[f64], dim: usize) -> Result<f64, SpectralError> {
    assert_eq!(mat.len(), dim * dim);
    if dim > MAX_DENSE_DIM {
        return Err(SpectralError::TooLarge { dim });
    }
    if dim == 0 {
        return Ok(0.0);
    }
    let a = DMatrix::from_row_slice(dim, dim, mat);
    let schur = nalgebra::linalg::Schur::try_new(a, f64::EPSILON, 200 * dim + 20_000)
        .ok_or(SpectralError::NoConvergence { dim })?;
    let eig = schur.complex_eigenvalues();
    Ok(eig.iter().map(|z| z.norm()).fold(0.0f64, f64::max))
}

/// `(rho_2, lambda_max)` of a restricted family: `rho_2 = sqrt(rho(A))`
/// for the lifted operator `A`. For simple-matrix restrictions the
/// 1-radius equals `lambda_max` itself.
pub fn rho2_of_family(res: &RestrictedFamily) -> Result<(f64, f64), SpectralError> {
    if res.dim() == 0 {
        return Ok((0.0, 0.0));
    }
    let lifted = lift_operator(res);
    let lambda = spectral_radius_dense(lifted.matrix(), lifted.dim_sym)?;
    Ok((lambda.sqrt(), lambda))
}

/// Exact word counts for the collapse statistics of a simple family.
#[derive(Debug, Clone)]
pub struct CollapseCount {
    pub k: usize,
    /// Words of length `k` whose composed column map has singleton image
    /// (products with at most one positive row).
    pub collapsed: BigUint,
    /// `m^k`.
    pub total: BigUint,
    /// `[1 - collapsed/total]^{1/k}`.
    pub estimate: f64,
}

/// Subset dynamic program over images: the image of a word evolves
/// autonomously when letters are prepended, so propagating exact word
/// counts over reachable image subsets counts collapsed products without
/// enumerating the `m^k` words.
pub fn collapse_counts(mats: &[SimpleMatrix], k_max: usize) -> Vec<CollapseCount> {
    assert!(!mats.is_empty());
    let n = mats[0].size();
    assert!(n <= 64, "subset DP supports at most 64 states");
    let m = mats.len();
    let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut level: HashMap<u64, BigUint> = HashMap::from([(full, BigUint::one())]);
    let mut total = BigUint::one();
    let mut out = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let mut next: HashMap<u64, BigUint> = HashMap::with_capacity(level.len() * 2);
        for (mask, count) in &level {
            for t in mats {
                let img = t.apply_mask(*mask);
                next.entry(img)
                    .and_modify(|c| *c += count)
                    .or_insert_with(|| count.clone());
            }
        }
        level = next;
        total *= BigUint::from(m);
        let collapsed: BigUint = level
            .iter()
            .filter(|(mask, _)| mask.count_ones() == 1)
            .map(|(_, c)| c.clone())
            .sum();
        let surviving = &total - &collapsed;
        let ratio = match (surviving.to_f64(), total.to_f64()) {
            (Some(a), Some(b)) if b > 0.0 => a / b,
            _ => 0.0,
        };
        let estimate = if ratio <= 0.0 {
            0.0
        } else {
            ratio.powf(1.0 / k as f64)
        };
        out.push(CollapseCount {
            k,
            collapsed,
            total: total.clone(),
            estimate,
        });
    }
    out
}

/// The sequence `[1 - |T^k_0| / m^k]^{1/k}` for `k = 1..k_max`, converging
/// to the 1-radius of the family restricted to `W`.
pub fn rho1_combinatorial(fam: &TransitionFamily, k_max: usize) -> Vec<f64> {
    assert!(k_max <= 60, "counting depth capped at 60");
    collapse_counts(fam.mats(), k_max)
        .into_iter()
        .map(|c| c.estimate)
        .collect()
}

/// How the reported exponent is to be read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    /// Isotropic dilation and tile-verified attractor: `s = alpha` exactly.
    Exact,
    /// Isotropic dilation, attractor not verified as a tile: the value is a
    /// certified lower bound on `alpha` (the true difference subspace is
    /// contained in `W`, and restriction can only shrink the radius).
    LowerBoundOnAlpha,
}

/// Full spectral result for one system.
#[derive(Debug, Clone)]
pub struct RegularityReport {
    /// Ambient dimension `n`.
    pub dim: usize,
    /// The invariant index set used.
    pub set: LatticeSet,
    /// `N = |S|`.
    pub big_n: usize,
    /// Spectral radius of `M`.
    pub r: f64,
    pub rho2: f64,
    pub lambda_max: f64,
    /// `rho_1` of the restricted family; equals `lambda_max` for simple
    /// families.
    pub rho1: f64,
    /// Hoelder L1 exponent (or its lower bound, per `bound_kind`).
    pub alpha: f64,
    /// Surface regularity.
    pub s: f64,
    /// Surface dimension `n - s`.
    pub d: f64,
    pub exact: bool,
    pub bound_kind: BoundKind,
    pub tile: TileCheck,
}

/// Budget knobs for the tile-verification oracle run inside
/// [`regularity_report`].
#[derive(Debug, Clone, Copy, Default)]
pub struct AnalysisConfig {
    /// Word-enumeration depth; `None` picks the smallest depth that makes
    /// the point cloud dense at the chosen cell size.
    pub depth: Option<usize>,
    /// Fine raster cell size; `None` picks a per-dimension default.
    pub cell: Option<f64>,
}

/// The regularity pipeline: admissible set, transition matrices,
/// restriction to `W`, Perron eigenvalue, and the exponent
/// `alpha = -2 ln rho_2 / ln r`, classified by the tile oracle.
pub fn regularity_report(
    sys: &DilationSystem,
    cfg: &AnalysisConfig,
) -> Result<RegularityReport, SpectralError> {
    let profile = sys.profile();
    if !profile.isotropic {
        return Err(SpectralError::Unsupported { q: profile.q });
    }
    let set = admissible_set(sys)?;
    let fam = transition_matrices(sys, &set)?;
    let res = restrict_to_w(&fam);
    let (rho2, lambda_max) = rho2_of_family(&res)?;
    let r = profile.r;
    let alpha = alpha_from_rho2(rho2, r);
    let tile = oracle::tile_check(sys, cfg.depth, cfg.cell)?;
    let exact = matches!(tile, TileCheck::Tile { .. });
    let bound_kind = if exact {
        BoundKind::Exact
    } else {
        BoundKind::LowerBoundOnAlpha
    };
    let s = alpha;
    let d = sys.dim() as f64 - s;
    Ok(RegularityReport {
        dim: sys.dim(),
        big_n: set.len(),
        set,
        r,
        rho2,
        lambda_max,
        rho1: lambda_max,
        alpha,
        s,
        d,
        exact,
        bound_kind,
        tile,
    })
}

/// `alpha = 2 log_{1/r} rho_2`, clamped to `[0, 1]`; a vanishing radius
/// means eventually-zero differences and caps at 1.
pub fn alpha_from_rho2(rho2: f64, r: f64) -> f64 {
    if rho2 <= 0.0 {
        return 1.0;
    }
    let alpha = -2.0 * rho2.ln() / r.ln();
    debug_assert!(
        alpha <= 1.0 + 1e-6,
        "exponent {alpha} exceeds the theoretical cap"
    );
    alpha.clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::IntMatrix;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn ex20_family() -> TransitionFamily {
        let sys = DilationSystem::new(m(&[&[3]]), vec![vec![0], vec![1], vec![5]], None, None)
            .unwrap();
        let s = LatticeSet::scalars([0, 1, 2]);
        transition_matrices(&sys, &s).unwrap()
    }

    #[test]
    fn restriction_matches_printed_values() {
        let fam = ex20_family();
        let res = restrict_to_w(&fam);
        assert_eq!(res.dim(), 2);
        assert_eq!(res.mats()[0], vec![1, 0, 1, -1]);
        assert_eq!(res.mats()[1], vec![0, 1, 0, 1]);
        assert_eq!(res.mats()[2], vec![-1, 0, 0, 0]);
    }

    #[test]
    fn restriction_reproduces_action_on_differences() {
        // Column j of A must equal the difference-basis coordinates of
        // T (u_j - u_{j+1}), for every matrix and every basis vector.
        let fam = ex20_family();
        let res = restrict_to_w(&fam);
        let n = fam.size();
        for (t, a) in fam.mats().iter().zip(res.mats()) {
            for j in 0..n - 1 {
                let mut v = vec![0i64; n];
                v[t.map(j)] += 1;
                v[t.map(j + 1)] -= 1;
                // coordinates in the difference basis are prefix sums
                let mut prefix = 0i64;
                for i in 0..n - 1 {
                    prefix += v[i];
                    assert_eq!(a[i * (n - 1) + j], prefix, "mismatch at ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn lifted_operator_matches_hand_expansion() {
        // order (X11, X22, X12); expanding A^T X A by hand for
        // X = [[x, y], [y, z]] gives (1/3) [[2,1,2],[1,2,2],[0,-1,-1]]
        let fam = ex20_family();
        let lifted = lift_operator(&restrict_to_w(&fam));
        assert_eq!(lifted.dim_sym, 3);
        let want = [
            [2.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0],
            [1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0],
            [0.0, -1.0 / 3.0, -1.0 / 3.0],
        ];
        for i in 0..3 {
            for j in 0..3 {
                assert!(
                    (lifted.entry(i, j) - want[i][j]).abs() < 1e-15,
                    "entry ({i},{j}) = {}",
                    lifted.entry(i, j)
                );
            }
        }
    }

    #[test]
    fn spectral_radius_examples() {
        let a = [
            2.0 / 3.0,
            1.0 / 3.0,
            2.0 / 3.0,
            1.0 / 3.0,
            2.0 / 3.0,
            2.0 / 3.0,
            0.0,
            -1.0 / 3.0,
            -1.0 / 3.0,
        ];
        let rho = spectral_radius_dense(&a, 3).unwrap();
        let want = (1.0 + 2.0f64.sqrt()) / 3.0;
        assert!((rho - want).abs() < 1e-12, "rho = {rho}");

        let id = [1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0];
        assert!((spectral_radius_dense(&id, 3).unwrap() - 1.0).abs() < 1e-14);

        // purely imaginary pair
        let rot = [0.0, 1.0, -1.0, 0.0];
        assert!((spectral_radius_dense(&rot, 2).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rho2_of_three_digit_tile() {
        let fam = ex20_family();
        let (rho2, lambda) = rho2_of_family(&restrict_to_w(&fam)).unwrap();
        let want_lambda = (1.0 + 2.0f64.sqrt()) / 3.0;
        assert!((lambda - want_lambda).abs() < 1e-12);
        assert!((rho2 - want_lambda.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn empty_restriction() {
        let res = restrict_simple(&[SimpleMatrix::identity(1)]);
        assert_eq!(res.dim(), 0);
        let (rho2, lambda) = rho2_of_family(&res).unwrap();
        assert_eq!((rho2, lambda), (0.0, 0.0));
    }

    #[test]
    fn permutations_have_unit_radius() {
        // permutations act isometrically on W
        let mats = vec![
            SimpleMatrix::new(vec![1, 2, 0]),
            SimpleMatrix::new(vec![0, 2, 1]),
        ];
        let (rho2, _) = rho2_of_family(&restrict_simple(&mats)).unwrap();
        assert!((rho2 - 1.0).abs() < 1e-9, "rho2 = {rho2}");
    }

    #[test]
    fn collapse_counts_examples() {
        // constant column map: every word collapses
        let constant = vec![SimpleMatrix::new(vec![0, 0, 0])];
        let counts = collapse_counts(&constant, 5);
        for c in &counts {
            assert_eq!(c.collapsed, c.total);
            assert_eq!(c.estimate, 0.0);
        }

        // single permutation: nothing ever collapses
        use num_traits::Zero;
        let perm = vec![SimpleMatrix::new(vec![1, 2, 0])];
        for c in collapse_counts(&perm, 5) {
            assert!(c.collapsed.is_zero());
            assert!((c.estimate - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn dp_approaches_perron_eigenvalue() {
        let fam = ex20_family();
        let estimates = rho1_combinatorial(&fam, 40);
        let lambda = (1.0 + 2.0f64.sqrt()) / 3.0;
        let at40 = estimates[39];
        assert!(
            (at40 - lambda).abs() < 2e-2,
            "k=40 estimate {at40} vs lambda {lambda}"
        );
    }

    #[test]
    fn alpha_clamping() {
        assert_eq!(alpha_from_rho2(0.0, 3.0), 1.0);
        let rho2 = ((1.0 + 2.0f64.sqrt()) / 3.0).sqrt();
        let a = alpha_from_rho2(rho2, 3.0);
        assert!((a - 0.19776) < 5e-4);
    }
}
