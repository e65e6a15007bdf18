//! Exact integer-matrix arithmetic and spectral pre-analysis of dilation
//! matrices.
//!
//! Everything that feeds the lattice combinatorics is exact: determinants by
//! fraction-free (Bareiss) elimination, lattice membership by adjugate solve
//! with integrality check, the characteristic polynomial by Faddeev–LeVerrier
//! over big integers, and diagonalizability by a squarefree test on the exact
//! minimal polynomial. Only the eigenvalue *moduli* are floating point; they
//! come from squarefree factors, so the polishing iteration always sees
//! simple roots.

use nalgebra::{Complex, DMatrix};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Dimension cap. Exact cofactor arithmetic in `i128` stays comfortable for
/// desk-scale inputs up to 8x8; larger systems are rejected up front.
pub const MAX_DIM: usize = 8;

/// All eigenvalue moduli must exceed `1 + EXPANDING_TOL` for a matrix to be
/// accepted as expanding.
pub const EXPANDING_TOL: f64 = 1e-6;

/// Relative tolerance for merging eigenvalue moduli into groups.
pub const GROUP_TOL: f64 = 1e-6;

/// Target relative accuracy of eigenvalue moduli.
pub const EIGEN_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("matrix is not square or has no rows")]
    NotSquare,
    #[error("dimension {0} exceeds the supported maximum {MAX_DIM}")]
    DimensionTooLarge(usize),
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("matrix is not expanding: eigenvalue modulus {modulus} <= 1 + {EXPANDING_TOL}")]
    NotExpanding { modulus: f64 },
    #[error("vector length {got} does not match matrix dimension {want}")]
    DimensionMismatch { got: usize, want: usize },
    #[error("eigenvalue iteration failed to converge")]
    NoConvergence,
}

/// Square integer matrix with overflow-checked exact operations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    entries: Vec<i64>, // row-major
}

impl IntMatrix {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self, AlgebraError> {
        let n = rows.len();
        if n == 0 {
            return Err(AlgebraError::NotSquare);
        }
        if n > MAX_DIM {
            return Err(AlgebraError::DimensionTooLarge(n));
        }
        let mut entries = Vec::with_capacity(n * n);
        for row in &rows {
            if row.len() != n {
                return Err(AlgebraError::NotSquare);
            }
            entries.extend_from_slice(row);
        }
        Ok(Self { n, entries })
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0i64; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        Self { n, entries }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        (0..self.n)
            .map(|i| self.entries[i * self.n..(i + 1) * self.n].to_vec())
            .collect()
    }

    /// `M v` with overflow checking.
    pub fn mul_vec(&self, v: &[i64]) -> Result<Vec<i64>, AlgebraError> {
        if v.len() != self.n {
            return Err(AlgebraError::DimensionMismatch {
                got: v.len(),
                want: self.n,
            });
        }
        (0..self.n)
            .map(|i| {
                let mut acc: i64 = 0;
                for j in 0..self.n {
                    let t = self
                        .get(i, j)
                        .checked_mul(v[j])
                        .ok_or(AlgebraError::Overflow)?;
                    acc = acc.checked_add(t).ok_or(AlgebraError::Overflow)?;
                }
                Ok(acc)
            })
            .collect()
    }

    /// Entries as `f64`, row-major.
    pub fn to_f64(&self) -> Vec<f64> {
        self.entries.iter().map(|&e| e as f64).collect()
    }
}

/// Exact determinant via fraction-free Bareiss elimination in `i128`.
pub fn det_exact(m: &IntMatrix) -> Result<i128, AlgebraError> {
    let n = m.dim();
    let mut a: Vec<i128> = m.entries.iter().map(|&e| e as i128).collect();
    det_bareiss(&mut a, n)
}

fn det_bareiss(a: &mut [i128], n: usize) -> Result<i128, AlgebraError> {
    if n == 0 {
        return Ok(1);
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k * n + k] == 0 {
            let pivot = (k + 1..n).find(|&i| a[i * n + k] != 0);
            match pivot {
                Some(i) => {
                    for j in 0..n {
                        a.swap(k * n + j, i * n + j);
                    }
                    sign = -sign;
                }
                None => return Ok(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let lhs = a[i * n + j]
                    .checked_mul(a[k * n + k])
                    .ok_or(AlgebraError::Overflow)?;
                let rhs = a[i * n + k]
                    .checked_mul(a[k * n + j])
                    .ok_or(AlgebraError::Overflow)?;
                let num = lhs.checked_sub(rhs).ok_or(AlgebraError::Overflow)?;
                a[i * n + j] = num / prev; // exact by Bareiss identity
            }
        }
        prev = a[k * n + k];
    }
    Ok(sign * a[n * n - 1])
}

// ---------------------------------------------------------------------------
// Characteristic polynomial and squarefree machinery over Z[x].
//
// Polynomials are coefficient vectors in ascending order; all arithmetic is
// exact over BigInt so no overflow analysis is needed here.
// ---------------------------------------------------------------------------

type Poly = Vec<BigInt>;

fn poly_trim(p: &mut Poly) {
    while p.len() > 1 && p.last().map(Zero::is_zero).unwrap_or(false) {
        p.pop();
    }
}

fn poly_deg(p: &Poly) -> usize {
    p.len() - 1
}

fn poly_is_const(p: &Poly) -> bool {
    p.len() == 1
}

fn poly_derivative(p: &Poly) -> Poly {
    if p.len() <= 1 {
        return vec![BigInt::zero()];
    }
    let mut d: Poly = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();
    poly_trim(&mut d);
    d
}

fn big_gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let mut a = a.abs();
    let mut b = b.abs();
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

/// Primitive part with positive leading coefficient.
fn poly_primitive(p: &Poly) -> Poly {
    let mut content = BigInt::zero();
    for c in p {
        content = big_gcd(&content, c);
    }
    if content.is_zero() {
        return vec![BigInt::zero()];
    }
    let mut out: Poly = p.iter().map(|c| c / &content).collect();
    poly_trim(&mut out);
    if out.last().map(|c| c.is_negative()).unwrap_or(false) {
        for c in &mut out {
            *c = -(c.clone());
        }
    }
    out
}

/// Pseudo-remainder of `a` by `b` (lead(b)^(deg a - deg b + 1) * a mod b).
fn poly_pseudo_rem(a: &Poly, b: &Poly) -> Poly {
    let db = poly_deg(b);
    let lead_b = b[db].clone();
    let mut r = a.clone();
    poly_trim(&mut r);
    while !(r.len() == 1 && r[0].is_zero()) && poly_deg(&r) >= db {
        let dr = poly_deg(&r);
        let shift = dr - db;
        let lead_r = r[dr].clone();
        for c in r.iter_mut() {
            *c = &*c * &lead_b;
        }
        for j in 0..=db {
            r[shift + j] = &r[shift + j] - &lead_r * &b[j];
        }
        poly_trim(&mut r);
        if poly_deg(&r) == dr && dr >= db {
            // leading term must have cancelled
            debug_assert!(r[dr].is_zero());
            r.pop();
            poly_trim(&mut r);
        }
    }
    r
}

/// Primitive polynomial gcd over Z[x] (Euclid with pseudo-remainders).
fn poly_gcd(a: &Poly, b: &Poly) -> Poly {
    let mut a = poly_primitive(a);
    let mut b = poly_primitive(b);
    if a.len() == 1 && a[0].is_zero() {
        return b;
    }
    if b.len() == 1 && b[0].is_zero() {
        return a;
    }
    if poly_deg(&a) < poly_deg(&b) {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        if b.len() == 1 && b[0].is_zero() {
            return poly_primitive(&a);
        }
        if poly_is_const(&b) {
            return vec![BigInt::one()];
        }
        let r = poly_pseudo_rem(&a, &b);
        a = b;
        b = poly_primitive(&r);
    }
}

/// Exact division of primitive polynomials; panics if not divisible
/// (callers only divide by known factors).
fn poly_div_exact(a: &Poly, b: &Poly) -> Poly {
    let da = poly_deg(a);
    let db = poly_deg(b);
    assert!(da >= db, "exact division with deg(a) < deg(b)");
    let mut r = a.clone();
    let mut q = vec![BigInt::zero(); da - db + 1];
    for k in (0..=da - db).rev() {
        let num = r[db + k].clone();
        if num.is_zero() {
            continue;
        }
        let (c, rem) = num_integer_div_rem(&num, &b[db]);
        assert!(rem.is_zero(), "non-exact polynomial division");
        for j in 0..=db {
            r[k + j] = &r[k + j] - &c * &b[j];
        }
        q[k] = c;
    }
    assert!(r.iter().all(Zero::is_zero), "non-zero remainder in exact division");
    poly_trim(&mut q);
    q
}

fn num_integer_div_rem(a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
    let q = a / b;
    let r = a - &q * b;
    (q, r)
}

/// Yun's squarefree decomposition: returns `(factor, multiplicity)` pairs
/// with each factor primitive and squarefree, `p ~ prod factor^mult`.
fn yun_squarefree(p: &Poly) -> Vec<(Poly, usize)> {
    let f = poly_primitive(p);
    if poly_deg(&f) == 0 {
        return vec![];
    }
    let df = poly_derivative(&f);
    let g = poly_gcd(&f, &df);
    if poly_is_const(&g) {
        return vec![(f, 1)];
    }
    let mut out = Vec::new();
    let mut c = poly_div_exact(&f, &g);
    let mut d = {
        let t = poly_div_exact(&df, &g);
        poly_sub(&t, &poly_derivative(&c))
    };
    let mut i = 1usize;
    loop {
        let a = poly_gcd(&c, &d);
        if !poly_is_const(&a) {
            out.push((a.clone(), i));
        }
        c = poly_div_exact(&c, &a);
        if poly_is_const(&c) {
            break;
        }
        let t = poly_div_exact(&d, &a);
        d = poly_sub(&t, &poly_derivative(&c));
        i += 1;
    }
    out
}

fn poly_sub(a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    let mut out = vec![BigInt::zero(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    poly_trim(&mut out);
    out
}

/// Characteristic polynomial of `m`, monic, ascending coefficients,
/// computed exactly by Faddeev–LeVerrier.
pub fn char_poly(m: &IntMatrix) -> Poly {
    let n = m.dim();
    let a: Vec<BigInt> = m.entries.iter().map(|&e| BigInt::from(e)).collect();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    // b starts as the identity; iterate b <- a*b + c_k I.
    let mut b: Vec<BigInt> = (0..n * n)
        .map(|idx| {
            if idx / n == idx % n {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        })
        .collect();
    for k in 1..=n {
        // ab = a * b
        let mut ab = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = BigInt::zero();
                for l in 0..n {
                    acc += &a[i * n + l] * &b[l * n + j];
                }
                ab[i * n + j] = acc;
            }
        }
        let mut tr = BigInt::zero();
        for i in 0..n {
            tr += &ab[i * n + i];
        }
        let (ck, rem) = num_integer_div_rem(&(-tr), &BigInt::from(k));
        debug_assert!(rem.is_zero(), "Faddeev-LeVerrier division must be exact");
        coeffs[n - k] = ck.clone();
        for i in 0..n {
            ab[i * n + i] += &ck;
        }
        b = ab;
    }
    coeffs
}

/// The squarefree part of `p` (its radical), primitive.
fn poly_radical(p: &Poly) -> Poly {
    let f = poly_primitive(p);
    let g = poly_gcd(&f, &poly_derivative(&f));
    if poly_is_const(&g) {
        f
    } else {
        poly_primitive(&poly_div_exact(&f, &g))
    }
}

/// Does `p(m) = 0` hold exactly? Evaluated by Horner over BigInt.
fn poly_annihilates(p: &Poly, m: &IntMatrix) -> bool {
    let n = m.dim();
    let a: Vec<BigInt> = m.entries.iter().map(|&e| BigInt::from(e)).collect();
    let mut acc = vec![BigInt::zero(); n * n];
    for i in 0..n {
        acc[i * n + i] = p[p.len() - 1].clone();
    }
    for k in (0..p.len() - 1).rev() {
        // acc <- acc * a + p[k] I
        let mut next = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                let mut s = BigInt::zero();
                for l in 0..n {
                    s += &acc[i * n + l] * &a[l * n + j];
                }
                next[i * n + j] = s;
            }
        }
        for i in 0..n {
            next[i * n + i] += &p[k];
        }
        acc = next;
    }
    acc.iter().all(Zero::is_zero)
}

// ---------------------------------------------------------------------------
// Root moduli.
// ---------------------------------------------------------------------------

fn poly_to_f64(p: &Poly) -> Option<Vec<f64>> {
    p.iter().map(|c| c.to_f64()).collect::<Option<Vec<_>>>()
}

/// Complex roots of a squarefree real polynomial given by f64 coefficients
/// (ascending). Degree 1 and 2 are closed-form; higher degrees go through
/// the companion matrix, then every root gets a few Newton steps against the
/// exact coefficients. Squarefreeness keeps all roots simple, so Newton
/// converges quadratically.
fn roots_squarefree(coeffs: &[f64]) -> Result<Vec<Complex<f64>>, AlgebraError> {
    let deg = coeffs.len() - 1;
    let lead = coeffs[deg];
    if !lead.is_finite() || lead == 0.0 {
        return Err(AlgebraError::Overflow);
    }
    let monic: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();
    if monic.iter().any(|c| !c.is_finite()) {
        return Err(AlgebraError::Overflow);
    }
    let mut roots: Vec<Complex<f64>> = match deg {
        0 => vec![],
        1 => vec![Complex::new(-monic[0], 0.0)],
        2 => {
            let (c, b) = (monic[0], monic[1]);
            let disc = b * b - 4.0 * c;
            if disc >= 0.0 {
                let sq = disc.sqrt();
                // stable form: avoid cancellation in the smaller root
                let q = -0.5 * (b + b.signum() * sq);
                if q == 0.0 {
                    vec![Complex::new(0.0, 0.0), Complex::new(-b, 0.0)]
                } else {
                    vec![Complex::new(q, 0.0), Complex::new(c / q, 0.0)]
                }
            } else {
                let re = -b / 2.0;
                let im = (-disc).sqrt() / 2.0;
                vec![Complex::new(re, im), Complex::new(re, -im)]
            }
        }
        _ => {
            let mut comp = DMatrix::<f64>::zeros(deg, deg);
            for i in 1..deg {
                comp[(i, i - 1)] = 1.0;
            }
            for i in 0..deg {
                comp[(i, deg - 1)] = -monic[i];
            }
            let schur = nalgebra::linalg::Schur::try_new(comp, 1e-14, 10_000)
                .ok_or(AlgebraError::NoConvergence)?;
            schur.complex_eigenvalues().iter().copied().collect()
        }
    };
    // Newton polish against the exact polynomial.
    for z in roots.iter_mut() {
        for _ in 0..4 {
            let (p, dp) = horner_complex(&monic, *z);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            *z -= step;
            if step.norm() <= 1e-15 * (z.norm() + 1.0) {
                break;
            }
        }
    }
    Ok(roots)
}

fn horner_complex(monic: &[f64], z: Complex<f64>) -> (Complex<f64>, Complex<f64>) {
    let deg = monic.len() - 1;
    let mut p = Complex::new(1.0, 0.0);
    let mut dp = Complex::new(0.0, 0.0);
    for k in (0..deg).rev() {
        dp = dp * z + p;
        p = p * z + monic[k];
    }
    (p, dp)
}

/// Absolute values of all `n` eigenvalues (with multiplicity), ascending.
/// Roots are extracted from the exact squarefree factorization of the
/// characteristic polynomial, so multiplicities are exact and the numeric
/// root finder only ever sees simple roots.
pub fn eigen_moduli(m: &IntMatrix, _tol: f64) -> Result<Vec<f64>, AlgebraError> {
    let p = char_poly(m);
    let factors = yun_squarefree(&p);
    let mut moduli = Vec::with_capacity(m.dim());
    for (factor, mult) in &factors {
        let cf = poly_to_f64(factor).ok_or(AlgebraError::Overflow)?;
        let roots = roots_squarefree(&cf)?;
        for z in roots {
            for _ in 0..*mult {
                moduli.push(z.norm());
            }
        }
    }
    debug_assert_eq!(moduli.len(), m.dim());
    moduli.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(moduli)
}

/// Spectral data of a dilation matrix: eigenvalue moduli grouped by
/// magnitude, the spectral radius, |det M| and the isotropy flag.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralProfile {
    /// All eigenvalue moduli, ascending, with multiplicity.
    pub moduli: Vec<f64>,
    /// `(r_i, n_i)` pairs, ascending in `r_i`; `sum n_i = n`.
    pub groups: Vec<(f64, usize)>,
    /// Number of modulus groups.
    pub q: usize,
    /// Equal moduli and diagonalizable.
    pub isotropic: bool,
    /// Spectral radius of `M`.
    pub r: f64,
    /// `m = |det M|`, exact.
    pub det_abs: u64,
}

/// Validate `m` as an expanding dilation matrix and compute its profile.
///
/// A matrix counts as expanding only if every eigenvalue modulus exceeds
/// `1 + EXPANDING_TOL`. Isotropy is equal-modulus plus diagonalizability,
/// the latter decided exactly: the characteristic polynomial is squarefree,
/// or its radical annihilates `M`.
pub fn analyze_dilation(m: &IntMatrix) -> Result<SpectralProfile, AlgebraError> {
    let det = det_exact(m)?;
    let det_abs = det
        .unsigned_abs()
        .try_into()
        .map_err(|_| AlgebraError::Overflow)?;
    let moduli = eigen_moduli(m, EIGEN_TOL)?;
    if let Some(&lo) = moduli.first() {
        if lo <= 1.0 + EXPANDING_TOL {
            return Err(AlgebraError::NotExpanding { modulus: lo });
        }
    }
    let mut groups: Vec<(f64, usize)> = Vec::new();
    for &x in &moduli {
        match groups.last_mut() {
            // transitive merge: compare against the running group maximum
            Some((gmax, count)) if x <= *gmax * (1.0 + GROUP_TOL) => {
                *gmax = x.max(*gmax);
                *count += 1;
            }
            _ => groups.push((x, 1)),
        }
    }
    let q = groups.len();
    let r = groups.last().map(|&(g, _)| g).unwrap_or(0.0);
    let isotropic = q == 1 && {
        let p = char_poly(m);
        let g = poly_gcd(&p, &poly_derivative(&p));
        poly_is_const(&g) || poly_annihilates(&poly_radical(&p), m)
    };
    Ok(SpectralProfile {
        moduli,
        groups,
        q,
        isotropic,
        r,
        det_abs,
    })
}

// ---------------------------------------------------------------------------
// Exact lattice membership: M x = v over the integers.
// ---------------------------------------------------------------------------

/// Precomputed adjugate solver for `M x = v` over the integers.
pub struct LatticeSolver {
    n: usize,
    det: i128,
    adj: Vec<i128>, // adjugate, row-major: adj * M = det * I
}

impl LatticeSolver {
    pub fn new(m: &IntMatrix) -> Result<Self, AlgebraError> {
        let n = m.dim();
        let det = det_exact(m)?;
        if det == 0 {
            // a singular matrix can never be expanding
            return Err(AlgebraError::NotExpanding { modulus: 0.0 });
        }
        let mut adj = vec![0i128; n * n];
        for i in 0..n {
            for j in 0..n {
                // cofactor C_ij goes to adj[j][i]
                let mut minor = Vec::with_capacity((n - 1) * (n - 1));
                for r in 0..n {
                    if r == i {
                        continue;
                    }
                    for c in 0..n {
                        if c == j {
                            continue;
                        }
                        minor.push(m.get(r, c) as i128);
                    }
                }
                let d = det_bareiss(&mut minor, n - 1)?;
                let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                adj[j * n + i] = sign * d;
            }
        }
        Ok(Self { n, det, adj })
    }

    pub fn det(&self) -> i128 {
        self.det
    }

    /// Exact solution of `M x = v` if it is integral, else `None`.
    pub fn solve_integer(&self, v: &[i64]) -> Result<Option<Vec<i64>>, AlgebraError> {
        if v.len() != self.n {
            return Err(AlgebraError::DimensionMismatch {
                got: v.len(),
                want: self.n,
            });
        }
        let mut out = Vec::with_capacity(self.n);
        for i in 0..self.n {
            let mut acc: i128 = 0;
            for j in 0..self.n {
                let t = self.adj[i * self.n + j]
                    .checked_mul(v[j] as i128)
                    .ok_or(AlgebraError::Overflow)?;
                acc = acc.checked_add(t).ok_or(AlgebraError::Overflow)?;
            }
            if acc % self.det != 0 {
                return Ok(None);
            }
            let x = acc / self.det;
            let x64: i64 = x.try_into().map_err(|_| AlgebraError::Overflow)?;
            out.push(x64);
        }
        Ok(Some(out))
    }

    /// Is `v` in the sublattice `M Z^n`?
    pub fn in_lattice(&self, v: &[i64]) -> Result<bool, AlgebraError> {
        Ok(self.solve_integer(v)?.is_some())
    }

    /// `adj(M) v`, exact; `adj(M) v / det` is the rational solution of `M x = v`.
    pub fn adj_times(&self, v: &[i64]) -> Result<Vec<i128>, AlgebraError> {
        if v.len() != self.n {
            return Err(AlgebraError::DimensionMismatch {
                got: v.len(),
                want: self.n,
            });
        }
        (0..self.n)
            .map(|i| {
                let mut acc: i128 = 0;
                for j in 0..self.n {
                    let t = self.adj[i * self.n + j]
                        .checked_mul(v[j] as i128)
                        .ok_or(AlgebraError::Overflow)?;
                    acc = acc.checked_add(t).ok_or(AlgebraError::Overflow)?;
                }
                Ok(acc)
            })
            .collect()
    }
}

/// One-shot form of [`LatticeSolver::in_lattice`].
pub fn in_lattice_m(m: &IntMatrix, v: &[i64]) -> Result<bool, AlgebraError> {
    LatticeSolver::new(m)?.in_lattice(v)
}
