//! Exact dense linear algebra over a prime field F_p.
//!
//! Every Hom/Ext computation in the workbench reduces to the operations in
//! this module. Matrices are dense and row-major; all arithmetic is exact
//! (reduce mod p, invert by extended Euclid), so there is no tolerance
//! anywhere. The prime is carried by each matrix and checked on every binary
//! operation.

use crate::error::{Error, Result};

/// Default session prime. Large enough that p exceeds the dimension of every
/// algebra and endomorphism ring handled at desk scale, which the radical
/// computation in the module layer requires.
pub const DEFAULT_PRIME: u64 = 32003;

/// Deterministic primality test by trial division; fine for the word-sized
/// primes this crate accepts.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/* # Scalar arithmetic */

/// Reduce a signed integer into the canonical range 0..p.
pub fn norm(p: u64, x: i64) -> u64 {
    let m = x.rem_euclid(p as i64);
    m as u64
}

pub fn fadd(p: u64, a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

pub fn fsub(p: u64, a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub fn fmul(p: u64, a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn fneg(p: u64, a: u64) -> u64 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

/// Multiplicative inverse by extended Euclid. Panics on 0; the caller only
/// inverts pivots that were tested nonzero.
pub fn finv(p: u64, a: u64) -> u64 {
    assert!(a != 0, "inverse of zero in F_p");
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert!(r0 == 1, "argument not invertible");
    (t0.rem_euclid(p as i128)) as u64
}

/* # Matrix type */

/// Dense row-major matrix over F_p. Entries are always reduced.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    pub p: u64,
    pub rows: usize,
    pub cols: usize,
    a: Vec<u64>,
}

impl std::fmt::Debug for Mat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Mat {}x{} mod {}", self.rows, self.cols, self.p)?;
        for i in 0..self.rows {
            write!(f, "  [")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = u64;
    fn index(&self, (i, j): (usize, usize)) -> &u64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.a[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut u64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.a[i * self.cols + j]
    }
}

/// Output of `rref`: the reduced matrix, its pivot columns, and the rank.
#[derive(Clone, Debug)]
pub struct Rref {
    pub mat: Mat,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl Mat {
    pub fn zeros(p: u64, rows: usize, cols: usize) -> Mat {
        Mat { p, rows, cols, a: vec![0; rows * cols] }
    }

    pub fn identity(p: u64, n: usize) -> Mat {
        let mut m = Mat::zeros(p, n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(p: u64, rows: &[Vec<i64>]) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Mat::zeros(p, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = norm(p, x);
            }
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    fn same_field(&self, other: &Mat) {
        assert_eq!(self.p, other.p, "prime mismatch between matrices");
    }

    pub fn add(&self, other: &Mat) -> Mat {
        self.same_field(other);
        assert!(self.rows == other.rows && self.cols == other.cols, "shape mismatch in add");
        let mut m = self.clone();
        for (x, &y) in m.a.iter_mut().zip(other.a.iter()) {
            *x = fadd(self.p, *x, y);
        }
        m
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        self.same_field(other);
        assert!(self.rows == other.rows && self.cols == other.cols, "shape mismatch in sub");
        let mut m = self.clone();
        for (x, &y) in m.a.iter_mut().zip(other.a.iter()) {
            *x = fsub(self.p, *x, y);
        }
        m
    }

    pub fn neg(&self) -> Mat {
        let mut m = self.clone();
        for x in m.a.iter_mut() {
            *x = fneg(self.p, *x);
        }
        m
    }

    pub fn scale(&self, c: u64) -> Mat {
        let mut m = self.clone();
        for x in m.a.iter_mut() {
            *x = fmul(self.p, *x, c);
        }
        m
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        self.same_field(other);
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let mut m = Mat::zeros(self.p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let x = self[(i, k)];
                if x == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let t = fmul(self.p, x, other[(k, j)]);
                    m[(i, j)] = fadd(self.p, m[(i, j)], t);
                }
            }
        }
        m
    }

    /// Stack `self` above `other`.
    pub fn vstack(&self, other: &Mat) -> Mat {
        self.same_field(other);
        assert_eq!(self.cols, other.cols, "shape mismatch in vstack");
        let mut a = self.a.clone();
        a.extend_from_slice(&other.a);
        Mat { p: self.p, rows: self.rows + other.rows, cols: self.cols, a }
    }

    /// Place `self` left of `other`.
    pub fn hstack(&self, other: &Mat) -> Mat {
        self.same_field(other);
        assert_eq!(self.rows, other.rows, "shape mismatch in hstack");
        let mut m = Mat::zeros(self.p, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)];
            }
            for j in 0..other.cols {
                m[(i, self.cols + j)] = other[(i, j)];
            }
        }
        m
    }

    pub fn row(&self, i: usize) -> Mat {
        let mut m = Mat::zeros(self.p, 1, self.cols);
        for j in 0..self.cols {
            m[(0, j)] = self[(i, j)];
        }
        m
    }

    /// Copy a rectangular block, rows r0..r1 and columns c0..c1.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Mat {
        assert!(r0 <= r1 && r1 <= self.rows && c0 <= c1 && c1 <= self.cols);
        let mut m = Mat::zeros(self.p, r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                m[(i - r0, j - c0)] = self[(i, j)];
            }
        }
        m
    }

    /// Write `blk` into `self` with top-left corner at (r0, c0).
    pub fn set_block(&mut self, r0: usize, c0: usize, blk: &Mat) {
        assert!(r0 + blk.rows <= self.rows && c0 + blk.cols <= self.cols);
        for i in 0..blk.rows {
            for j in 0..blk.cols {
                self[(r0 + i, c0 + j)] = blk[(i, j)];
            }
        }
    }

    /* # Echelon forms and solving */

    /// Reduced row echelon form with pivot columns and rank.
    pub fn rref(&self) -> Rref {
        let p = self.p;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m[(i, c)] != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    let t = m[(r, j)];
                    m[(r, j)] = m[(pr, j)];
                    m[(pr, j)] = t;
                }
            }
            let inv = finv(p, m[(r, c)]);
            for j in 0..m.cols {
                m[(r, j)] = fmul(p, m[(r, j)], inv);
            }
            for i in 0..m.rows {
                if i != r && m[(i, c)] != 0 {
                    let f = m[(i, c)];
                    for j in 0..m.cols {
                        let t = fmul(p, f, m[(r, j)]);
                        m[(i, j)] = fsub(p, m[(i, j)], t);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { mat: m, rank: pivots.len(), pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Solve A·X = B for X (column convention). Returns None when B is not in
    /// the column space of A. Errors on a row-count mismatch.
    pub fn solve_right(&self, b: &Mat) -> Result<Option<Mat>> {
        self.same_field(b);
        if self.rows != b.rows {
            return Err(Error::ShapeMismatch {
                what: format!("solve: A has {} rows, B has {}", self.rows, b.rows),
            });
        }
        let aug = self.hstack(b);
        let red = aug.rref();
        // A pivot in the B-part means inconsistency.
        if red.pivots.iter().any(|&c| c >= self.cols) {
            return Ok(None);
        }
        let mut x = Mat::zeros(self.p, self.cols, b.cols);
        for (r, &c) in red.pivots.iter().enumerate() {
            for j in 0..b.cols {
                x[(c, j)] = red.mat[(r, self.cols + j)];
            }
        }
        debug_assert_eq!(self.mul(&x), *b);
        Ok(Some(x))
    }

    /// Basis of {v : A·v = 0} as the columns of the returned matrix.
    pub fn kernel_cols(&self) -> Mat {
        let red = self.rref();
        let free: Vec<usize> =
            (0..self.cols).filter(|c| !red.pivots.contains(c)).collect();
        let mut k = Mat::zeros(self.p, self.cols, free.len());
        for (j, &fc) in free.iter().enumerate() {
            k[(fc, j)] = 1;
            for (r, &pc) in red.pivots.iter().enumerate() {
                k[(pc, j)] = fneg(self.p, red.mat[(r, fc)]);
            }
        }
        debug_assert!(self.mul(&k).is_zero());
        k
    }

    /// Basis of {v : v·A = 0} as the rows of the returned matrix.
    pub fn left_kernel_rows(&self) -> Mat {
        self.transpose().kernel_cols().transpose()
    }

    /// Solve X·A = B for X (row convention).
    pub fn solve_left(&self, b: &Mat) -> Result<Option<Mat>> {
        Ok(self
            .transpose()
            .solve_right(&b.transpose())?
            .map(|x| x.transpose()))
    }

    /// Basis of the row space: the nonzero rows of the rref.
    pub fn row_basis(&self) -> Mat {
        let red = self.rref();
        red.mat.block(0, red.rank, 0, self.cols)
    }

    pub fn inverse(&self) -> Option<Mat> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let id = Mat::identity(self.p, self.rows);
        match self.solve_right(&id) {
            Ok(Some(x)) if self.mul(&x) == id && x.mul(self) == id => Some(x),
            _ => None,
        }
    }

    /// True iff the row vector v lies in the row space of `self`.
    pub fn row_space_contains(&self, v: &Mat) -> bool {
        assert_eq!(v.rows, 1);
        assert_eq!(v.cols, self.cols);
        self.rank() == self.vstack(v).rank()
    }
}

/// Sum and intersection of two row-span subspaces of the same ambient space.
/// Returns (basis of U+V, basis of U∩V), each as rows. Uses the Zassenhaus
/// block trick, so both come out of one elimination.
pub fn sum_intersect(u: &Mat, v: &Mat) -> Result<(Mat, Mat)> {
    if u.p != v.p {
        return Err(Error::ShapeMismatch { what: "prime mismatch".into() });
    }
    if u.cols != v.cols {
        return Err(Error::ShapeMismatch {
            what: format!("ambient mismatch: {} vs {}", u.cols, v.cols),
        });
    }
    let n = u.cols;
    let p = u.p;
    // Rows [u | u] and [v | 0]; after elimination, rows with zero left half
    // carry an intersection basis in the right half.
    let top = u.hstack(u);
    let bot = v.hstack(&Mat::zeros(p, v.rows, n));
    let red = top.vstack(&bot).rref();
    let mut sum_rows = Vec::new();
    let mut int_rows = Vec::new();
    for i in 0..red.rank {
        let left = red.mat.block(i, i + 1, 0, n);
        let right = red.mat.block(i, i + 1, n, 2 * n);
        if left.is_zero() {
            int_rows.push(right);
        } else {
            sum_rows.push(left);
        }
    }
    let stackup = |rows: Vec<Mat>| -> Mat {
        let mut m = Mat::zeros(p, 0, n);
        for r in rows {
            m = m.vstack(&r);
        }
        m
    };
    Ok((stackup(sum_rows), stackup(int_rows)))
}

/* # Polynomials over F_p
 *
 * A polynomial is a coefficient vector, lowest degree first, with no trailing
 * zeros (the zero polynomial is the empty vector). Only what the minimal-
 * polynomial splitting of endomorphisms needs lives here: ring operations,
 * gcd, powering mod m, and distinct-degree separation.
 */

pub type Poly = Vec<u64>;

pub fn poly_trim(mut f: Poly) -> Poly {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

pub fn poly_deg(f: &Poly) -> Option<usize> {
    if f.is_empty() {
        None
    } else {
        Some(f.len() - 1)
    }
}

pub fn poly_add(p: u64, f: &Poly, g: &Poly) -> Poly {
    let mut out = vec![0; f.len().max(g.len())];
    for (i, c) in f.iter().enumerate() {
        out[i] = *c;
    }
    for (i, c) in g.iter().enumerate() {
        out[i] = fadd(p, out[i], *c);
    }
    poly_trim(out)
}

pub fn poly_scale(p: u64, f: &Poly, s: u64) -> Poly {
    poly_trim(f.iter().map(|&c| fmul(p, c, s)).collect())
}

pub fn poly_mul(p: u64, f: &Poly, g: &Poly) -> Poly {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; f.len() + g.len() - 1];
    for (i, a) in f.iter().enumerate() {
        if *a == 0 {
            continue;
        }
        for (j, b) in g.iter().enumerate() {
            out[i + j] = fadd(p, out[i + j], fmul(p, *a, *b));
        }
    }
    poly_trim(out)
}

/// Quotient and remainder of f by g (g nonzero).
pub fn poly_divmod(p: u64, f: &Poly, g: &Poly) -> (Poly, Poly) {
    let g = poly_trim(g.clone());
    assert!(!g.is_empty(), "division by zero polynomial");
    let mut r = poly_trim(f.clone());
    let dg = g.len() - 1;
    let lead_inv = finv(p, *g.last().unwrap());
    let mut q = vec![0; r.len().saturating_sub(dg)];
    while r.len() >= g.len() && !r.is_empty() {
        let shift = r.len() - g.len();
        let c = fmul(p, *r.last().unwrap(), lead_inv);
        q[shift] = c;
        for (i, gc) in g.iter().enumerate() {
            r[shift + i] = fsub(p, r[shift + i], fmul(p, c, *gc));
        }
        r = poly_trim(r);
    }
    (poly_trim(q), r)
}

/// Monic greatest common divisor.
pub fn poly_gcd(p: u64, f: &Poly, g: &Poly) -> Poly {
    let mut a = poly_trim(f.clone());
    let mut b = poly_trim(g.clone());
    while !b.is_empty() {
        let (_, r) = poly_divmod(p, &a, &b);
        a = b;
        b = r;
    }
    if let Some(&lead) = a.last() {
        poly_scale(p, &a, finv(p, lead))
    } else {
        a
    }
}

/// f^e mod m by square and multiply.
pub fn poly_powmod(p: u64, f: &Poly, mut e: u64, m: &Poly) -> Poly {
    let mut base = poly_divmod(p, f, m).1;
    let mut acc: Poly = vec![1];
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_divmod(p, &poly_mul(p, &acc, &base), m).1;
        }
        base = poly_divmod(p, &poly_mul(p, &base, &base), m).1;
        e >>= 1;
    }
    acc
}

pub fn poly_derivative(p: u64, f: &Poly) -> Poly {
    if f.len() <= 1 {
        return Vec::new();
    }
    poly_trim((1..f.len()).map(|i| fmul(p, f[i], (i as u64) % p)).collect())
}

pub fn poly_eval(p: u64, f: &Poly, x: u64) -> u64 {
    let mut acc = 0;
    for &c in f.iter().rev() {
        acc = fadd(p, fmul(p, acc, x), c);
    }
    acc
}

/// A monic proper divisor u of m with gcd(u, m/u) = 1, if one exists.
/// Found by distinct-degree separation on the squarefree part, lifted to full
/// multiplicity so the cofactor is always coprime. May return None even when
/// a splitting exists, in the one shape it does not attempt (several distinct
/// irreducible factors all of one degree >= 2); callers treat None as "try
/// another element", never as a certificate.
pub fn poly_coprime_factor(p: u64, m: &Poly) -> Option<Poly> {
    let m = poly_trim(m.clone());
    let dm = poly_deg(&m)?;
    if dm == 0 {
        return None;
    }
    let sf = poly_radical(p, &m);
    let dsf = poly_deg(&sf)?;
    if dsf == 0 {
        return None;
    }
    // Distinct-degree pass: gcd(sf, x^{p^d} - x) is the product of the
    // irreducible factors of sf whose degree divides d. The first proper hit
    // splits sf into coprime halves.
    let x: Poly = vec![0, 1];
    let mut xp = poly_divmod(p, &x, &sf).1;
    let mut saturated_at = None;
    for d in 1..=dsf {
        xp = poly_powmod(p, &xp, p, &sf); // now x^{p^d} mod sf
        let diff = poly_add(p, &xp, &poly_scale(p, &x, p - 1));
        let g = poly_gcd(p, &sf, &diff);
        match poly_deg(&g) {
            Some(dg) if dg > 0 && dg < dsf => {
                return Some(lift_to_full_multiplicity(p, &m, &g));
            }
            Some(dg) if dg == dsf => {
                saturated_at = Some(d);
                break;
            }
            _ => {}
        }
    }
    // Saturation at d = 1 with dsf >= 2 means several distinct roots: peel
    // one off by direct scan.
    if saturated_at == Some(1) && dsf >= 2 {
        for lam in 0..p {
            if poly_eval(p, &sf, lam) == 0 {
                let lin = vec![fneg(p, lam), 1];
                return Some(lift_to_full_multiplicity(p, &m, &lin));
            }
        }
    }
    None
}

/// Extended Euclid: returns (gcd, a, b) with a·f + b·g = gcd, gcd monic.
pub fn poly_ext_gcd(p: u64, f: &Poly, g: &Poly) -> (Poly, Poly, Poly) {
    let mut r0 = poly_trim(f.clone());
    let mut r1 = poly_trim(g.clone());
    let (mut a0, mut a1): (Poly, Poly) = (vec![1], Vec::new());
    let (mut b0, mut b1): (Poly, Poly) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (q, r) = poly_divmod(p, &r0, &r1);
        let na = poly_add(p, &a0, &poly_scale(p, &poly_mul(p, &q, &a1), p - 1));
        let nb = poly_add(p, &b0, &poly_scale(p, &poly_mul(p, &q, &b1), p - 1));
        r0 = r1;
        r1 = r;
        a0 = a1;
        a1 = na;
        b0 = b1;
        b1 = nb;
    }
    if let Some(&lead) = r0.last() {
        let s = finv(p, lead);
        (poly_scale(p, &r0, s), poly_scale(p, &a0, s), poly_scale(p, &b0, s))
    } else {
        (r0, a0, b0)
    }
}

/// Product of the distinct irreducible factors of m, each once (the radical),
/// exact in any characteristic: factors with multiplicity divisible by p are
/// recovered through p-th-root descent on the part with zero derivative.
pub fn poly_radical(p: u64, m: &Poly) -> Poly {
    let m = poly_trim(m.clone());
    if poly_deg(&m).is_none_or(|d| d == 0) {
        return m;
    }
    let deriv = poly_derivative(p, &m);
    if deriv.is_empty() {
        // m = u(x)^p with u read off every p-th coefficient.
        let u: Poly = m.iter().step_by(p as usize).copied().collect();
        return poly_radical(p, &poly_trim(u));
    }
    let c = poly_gcd(p, &m, &deriv);
    // w carries each factor whose multiplicity p does not divide, once.
    let w = poly_divmod(p, &m, &c).0;
    // Strip those factors from c; what survives has all multiplicities
    // divisible by p and is handled by descent. The two factor sets are
    // disjoint, so the product below has no repeats.
    let mut cc = c;
    loop {
        let g = poly_gcd(p, &cc, &w);
        if poly_deg(&g).is_none_or(|d| d == 0) {
            break;
        }
        cc = poly_divmod(p, &cc, &g).0;
    }
    if poly_deg(&cc).is_none_or(|d| d == 0) {
        return w;
    }
    poly_mul(p, &w, &poly_radical(p, &cc))
}

/// Multiply the divisor u of m by every irreducible factor of m it shares,
/// raised to full multiplicity: gcd(m, u^deg(m)).
fn lift_to_full_multiplicity(p: u64, m: &Poly, u: &Poly) -> Poly {
    let e = poly_deg(m).unwrap_or(0) as u64 + 1;
    // u^e mod m, then gcd with m, catches every shared factor at its
    // multiplicity in m.
    let ue = poly_powmod(p, u, e, m);
    if ue.is_empty() {
        // u^e is divisible by m: u already carries every factor of m.
        return poly_trim(m.clone());
    }
    poly_gcd(p, m, &ue)
}

/// Minimal polynomial of a square matrix, monic, by incremental elimination
/// on the Krylov sequence I, F, F^2, ...
pub fn minimal_polynomial(f: &Mat) -> Poly {
    assert_eq!(f.rows, f.cols);
    let p = f.p;
    let n = f.rows;
    if n == 0 {
        return vec![1];
    }
    let flat = |m: &Mat| -> Mat {
        let mut v = Mat::zeros(p, 1, n * n);
        for i in 0..n {
            for j in 0..n {
                v[(0, i * n + j)] = m[(i, j)];
            }
        }
        v
    };
    let mut pow = Mat::identity(p, n);
    let mut stack = Mat::zeros(p, 0, n * n);
    let mut powers: Vec<Mat> = Vec::new();
    loop {
        let v = flat(&pow);
        // Is v in the row space of the previous powers?
        if stack.rows > 0 && stack.row_space_contains(&v) {
            // Solve c * stack' = v over the raw (non-reduced) power list.
            let raw = {
                let mut m = Mat::zeros(p, 0, n * n);
                for q in &powers {
                    m = m.vstack(&flat(q));
                }
                m
            };
            let coeffs = raw
                .transpose()
                .solve_right(&v.transpose())
                .expect("shape")
                .expect("dependence certified by rank");
            let k = powers.len();
            let mut poly = vec![0u64; k + 1];
            for i in 0..k {
                poly[i] = fneg(p, coeffs[(i, 0)]);
            }
            poly[k] = 1;
            return poly_trim(poly);
        }
        stack = stack.vstack(&v).row_basis();
        powers.push(pow.clone());
        pow = pow.mul(f);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_identity() {
        let m = Mat::identity(5, 2);
        let r = m.rref();
        assert_eq!(r.mat, m);
        assert_eq!(r.pivots, vec![0, 1]);
        assert_eq!(r.rank, 2);
    }

    #[test]
    fn rref_zero() {
        let m = Mat::zeros(5, 3, 2);
        let r = m.rref();
        assert!(r.mat.is_zero());
        assert!(r.pivots.is_empty());
        assert_eq!(r.rank, 0);
    }

    #[test]
    fn rref_rank_one_over_f5() {
        let m = Mat::from_rows(5, &[vec![1, 2], vec![2, 4]]);
        let r = m.rref();
        assert_eq!(r.mat, Mat::from_rows(5, &[vec![1, 2], vec![0, 0]]));
        assert_eq!(r.rank, 1);
    }

    #[test]
    fn solve_identity() {
        let a = Mat::identity(7, 3);
        let b = Mat::from_rows(7, &[vec![1], vec![5], vec![6]]);
        let x = a.solve_right(&b).unwrap().unwrap();
        assert_eq!(x, b);
        assert_eq!(a.kernel_cols().cols, 0);
    }

    #[test]
    fn solve_zero_matrix() {
        let a = Mat::zeros(7, 2, 2);
        let b = Mat::zeros(7, 2, 1);
        let x = a.solve_right(&b).unwrap().unwrap();
        assert!(x.is_zero());
        assert_eq!(a.kernel_cols().cols, 2);
    }

    #[test]
    fn kernel_of_ones_row_over_f3() {
        let a = Mat::from_rows(3, &[vec![1, 1]]);
        let k = a.kernel_cols();
        assert_eq!(k.cols, 1);
        // The kernel of (1 1) over F_3 is spanned by (1, 2) up to scalar.
        let v = (k[(0, 0)], k[(1, 0)]);
        let canon = if v.0 == 1 { v } else { (fmul(3, v.0, finv(3, v.0)), fmul(3, v.1, finv(3, v.0))) };
        assert_eq!(canon, (1, 2));
    }

    #[test]
    fn solve_inconsistent() {
        let a = Mat::from_rows(5, &[vec![1, 2], vec![2, 4]]);
        let b = Mat::from_rows(5, &[vec![0], vec![1]]);
        assert!(a.solve_right(&b).unwrap().is_none());
    }

    #[test]
    fn sum_intersect_equal_spaces() {
        let u = Mat::from_rows(5, &[vec![1, 0, 1], vec![0, 1, 0]]);
        let (s, i) = sum_intersect(&u, &u).unwrap();
        assert_eq!(s.rows, 2);
        assert_eq!(i.rows, 2);
    }

    #[test]
    fn sum_intersect_complementary_lines() {
        let u = Mat::from_rows(32003, &[vec![1, 0]]);
        let v = Mat::from_rows(32003, &[vec![0, 1]]);
        let (s, i) = sum_intersect(&u, &v).unwrap();
        assert_eq!(s.rows, 2);
        assert_eq!(i.rows, 0);
    }

    #[test]
    fn sum_intersect_planes_in_f2_cubed() {
        // Two planes in F_2^3 sharing the line through (0,1,0).
        let u = Mat::from_rows(2, &[vec![1, 0, 0], vec![0, 1, 0]]);
        let v = Mat::from_rows(2, &[vec![0, 1, 0], vec![0, 0, 1]]);
        let (s, i) = sum_intersect(&u, &v).unwrap();
        assert_eq!(s.rows, 3);
        assert_eq!(i.rows, 1);
        assert_eq!(i, Mat::from_rows(2, &[vec![0, 1, 0]]));
    }

    #[test]
    fn sum_intersect_ambient_mismatch() {
        let u = Mat::from_rows(5, &[vec![1, 0]]);
        let v = Mat::from_rows(5, &[vec![1, 0, 0]]);
        assert!(sum_intersect(&u, &v).is_err());
    }

    #[test]
    fn inverse_roundtrip() {
        let a = Mat::from_rows(32003, &[vec![2, 1, 0], vec![1, 1, 3], vec![0, 5, 1]]);
        let inv = a.inverse().expect("invertible");
        assert_eq!(a.mul(&inv), Mat::identity(32003, 3));
    }

    #[test]
    fn singular_has_no_inverse() {
        let a = Mat::from_rows(5, &[vec![1, 2], vec![2, 4]]);
        assert!(a.inverse().is_none());
    }

    #[test]
    fn primality() {
        assert!(is_prime(2));
        assert!(is_prime(3));
        assert!(is_prime(32003));
        assert!(!is_prime(1));
        assert!(!is_prime(32001));
    }

    #[test]
    fn poly_gcd_of_shared_root() {
        let p = 5;
        // (x^2 - 1) and (x - 1) share x - 1.
        let f = vec![4, 0, 1];
        let g = vec![4, 1];
        assert_eq!(poly_gcd(p, &f, &g), vec![4, 1]);
    }

    #[test]
    fn coprime_factor_splits_mixed_multiplicity() {
        let p = 7;
        // m = x^2 (x - 1): a coprime divisor must be x^2 or x - 1.
        let m = poly_mul(p, &vec![0, 0, 1], &vec![6, 1]);
        let u = poly_coprime_factor(p, &m).expect("splits");
        let (q, r) = poly_divmod(p, &m, &u);
        assert!(r.is_empty());
        assert_eq!(poly_gcd(p, &u, &q), vec![1]);
        assert!(poly_deg(&u).unwrap() < poly_deg(&m).unwrap());
    }

    #[test]
    fn primary_polynomials_do_not_split() {
        let p = 3;
        // (x - 1)^3 has a single irreducible factor.
        let m = poly_mul(p, &poly_mul(p, &vec![2, 1], &vec![2, 1]), &vec![2, 1]);
        assert_eq!(poly_coprime_factor(p, &m), None);
        // x^2 + 1 is irreducible over F_3.
        assert_eq!(poly_coprime_factor(p, &vec![1, 0, 1]), None);
    }

    #[test]
    fn minimal_polynomial_examples() {
        let p = 32003;
        let nil = Mat::from_rows(p, &[vec![0, 1], vec![0, 0]]);
        assert_eq!(minimal_polynomial(&nil), vec![0, 0, 1]);
        let diag = Mat::from_rows(p, &[vec![1, 0], vec![0, 2]]);
        // (x - 1)(x - 2) = x^2 - 3x + 2.
        assert_eq!(minimal_polynomial(&diag), vec![2, 32000, 1]);
        let id = Mat::identity(p, 3);
        assert_eq!(minimal_polynomial(&id), vec![32002, 1]);
    }
}
