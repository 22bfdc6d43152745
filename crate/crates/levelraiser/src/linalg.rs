//! Exact linear algebra over Q, Z, and F_ell.
//!
//! Three matrix types, each as small as the job allows:
//!
//! * [`QMat`]: dense BigRational matrices with reduced row echelon form,
//!   kernels, and row-space solves.  Used for relation quotients, boundary
//!   maps, and subspace bases of modular symbols.
//! * [`ZMat`]: BigInt matrices with row Hermite normal form (with transform),
//!   saturated integer kernels, saturation of a row space, Bareiss
//!   determinants, and Faddeev-LeVerrier characteristic polynomials.  The
//!   divisions in Bareiss and Faddeev-LeVerrier are exact; both are checked.
//! * [`GfMat`]: matrices over F_ell for the mod-ell eigensystem search.
//!
//! Row convention throughout: vectors are rows, operators act on the right
//! (row i of an operator matrix is the image of basis vector i), so applying
//! T then S to v is v * T * S.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::inv_mod_u64;

// ---------------------------------------------------------------------------
// QMat
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigRational>,
}

impl QMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMat {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        QMat { rows: r, cols: c, data }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> QMat {
        let mut t = QMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &QMat) -> QMat {
        assert_eq!(self.cols, other.rows, "dim mismatch in mul");
        let mut out = QMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j) + a * b;
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    /// Stack the columns of `self` and `other` side by side.
    pub fn hstack(&self, other: &QMat) -> QMat {
        assert_eq!(self.rows, other.rows);
        let mut out = QMat::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    /// In-place reduced row echelon form; returns pivot column indices.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = self.get(r, c).recip();
            for j in c..self.cols {
                let v = self.get(r, j) * &inv;
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i != r && !self.get(i, c).is_zero() {
                    let f = self.get(i, c).clone();
                    for j in c..self.cols {
                        let v = self.get(i, j) - &f * self.get(r, j);
                        self.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis (as rows) of the right kernel { x : self . x^T = 0 }.
    pub fn right_kernel(&self) -> QMat {
        let mut m = self.clone();
        let pivots = m.rref();
        let rank = pivots.len();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = QMat::zeros(free.len(), self.cols);
        for (bi, &fc) in free.iter().enumerate() {
            basis.set(bi, fc, BigRational::one());
            for (pi, &pc) in pivots.iter().enumerate().take(rank) {
                let v = -m.get(pi, fc).clone();
                basis.set(bi, pc, v);
            }
        }
        basis
    }

    /// Basis (as rows) of the left kernel { v : v . self = 0 }.
    pub fn row_kernel(&self) -> QMat {
        self.transpose().right_kernel()
    }

    /// Solve X . self = rhs for X, given that each rhs row lies in the row
    /// space of `self`.  Returns None if some row does not.
    pub fn solve_left(&self, rhs: &QMat) -> Option<QMat> {
        assert_eq!(self.cols, rhs.cols);
        // Transpose: self^T . X^T = rhs^T, solved column by column from one rref.
        let at = self.transpose();
        let bt = rhs.transpose();
        let mut aug = at.hstack(&bt);
        let pivots = aug.rref();
        // consistency: no pivot may fall in the augmented block
        if pivots.iter().any(|&c| c >= self.rows) {
            return None;
        }
        let mut x = QMat::zeros(rhs.rows, self.rows);
        for (pi, &pc) in pivots.iter().enumerate() {
            for k in 0..rhs.rows {
                x.set(k, pc, aug.get(pi, self.rows + k).clone());
            }
        }
        // verify (cheap at our sizes, and guards against underdetermined systems)
        if &x.mul(self) != rhs {
            return None;
        }
        Some(x)
    }

    /// Common denominator cleared: returns (integer matrix, denominator d)
    /// with self = Z / d.
    pub fn clear_denominators(&self) -> (ZMat, BigInt) {
        let mut d = BigInt::one();
        for x in &self.data {
            d = num_integer::lcm(d, x.denom().clone());
        }
        let mut z = ZMat::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let q = self.get(i, j);
                z.set(i, j, q.numer() * (&d / q.denom()));
            }
        }
        (z, d)
    }
}

// ---------------------------------------------------------------------------
// ZMat
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigInt>,
}

impl ZMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ZMat {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ZMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        ZMat { rows: r, cols: c, data }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> ZMat {
        let mut t = ZMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &ZMat) -> ZMat {
        assert_eq!(self.cols, other.rows);
        let mut out = ZMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j) + a * b;
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn to_qmat(&self) -> QMat {
        let mut q = QMat::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                q.set(i, j, BigRational::from(self.get(i, j).clone()));
            }
        }
        q
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Row Hermite normal form together with the unimodular transform:
    /// returns (H, U) with U . self = H, H in row-echelon shape with positive
    /// pivots and reduced entries above each pivot, zero rows at the bottom.
    pub fn hnf_with_transform(&self) -> (ZMat, ZMat) {
        let mut h = self.clone();
        let mut u = ZMat::identity(self.rows);
        let mut r = 0usize;
        for c in 0..h.cols {
            if r == h.rows {
                break;
            }
            // Euclid down column c until at most one nonzero entry remains at/below r
            loop {
                let mut nz: Vec<usize> = (r..h.rows).filter(|&i| !h.get(i, c).is_zero()).collect();
                if nz.is_empty() {
                    break;
                }
                if nz.len() == 1 {
                    h.swap_rows(r, nz[0]);
                    u.swap_rows(r, nz[0]);
                    break;
                }
                // pick the entry of least absolute value as the pivot
                nz.sort_by_key(|&i| h.get(i, c).abs());
                let piv = nz[0];
                h.swap_rows(r, piv);
                u.swap_rows(r, piv);
                let pval = h.get(r, c).clone();
                for &i in nz.iter().skip(1) {
                    let i = if i == r { piv } else { i };
                    let q = div_floor_big(h.get(i, c), &pval);
                    if !q.is_zero() {
                        for j in 0..h.cols {
                            let v = h.get(i, j) - &q * h.get(r, j);
                            h.set(i, j, v);
                        }
                        for j in 0..u.cols {
                            let v = u.get(i, j) - &q * u.get(r, j);
                            u.set(i, j, v);
                        }
                    }
                }
            }
            if h.get(r, c).is_zero() {
                continue;
            }
            if h.get(r, c).is_negative() {
                for j in 0..h.cols {
                    let v = -h.get(r, j).clone();
                    h.set(r, j, v);
                }
                for j in 0..u.cols {
                    let v = -u.get(r, j).clone();
                    u.set(r, j, v);
                }
            }
            // reduce entries above the pivot into [0, pivot)
            let pval = h.get(r, c).clone();
            for i in 0..r {
                let q = div_floor_big(h.get(i, c), &pval);
                if !q.is_zero() {
                    for j in 0..h.cols {
                        let v = h.get(i, j) - &q * h.get(r, j);
                        h.set(i, j, v);
                    }
                    for j in 0..u.cols {
                        let v = u.get(i, j) - &q * u.get(r, j);
                        u.set(i, j, v);
                    }
                }
            }
            r += 1;
        }
        (h, u)
    }

    pub fn hnf(&self) -> ZMat {
        self.hnf_with_transform().0
    }

    /// Nonzero rows of the HNF (a basis of the row lattice).
    pub fn hnf_basis(&self) -> ZMat {
        let h = self.hnf();
        let keep: Vec<usize> = (0..h.rows)
            .filter(|&i| h.row(i).iter().any(|x| !x.is_zero()))
            .collect();
        let mut out = ZMat::zeros(keep.len(), h.cols);
        for (oi, &i) in keep.iter().enumerate() {
            for j in 0..h.cols {
                out.set(oi, j, h.get(i, j).clone());
            }
        }
        out
    }

    /// Basis of the left kernel lattice { x in Z^rows : x . self = 0 }.
    /// The basis is saturated: it generates the full kernel lattice.
    pub fn left_kernel(&self) -> ZMat {
        let (h, u) = self.hnf_with_transform();
        let zero_rows: Vec<usize> = (0..h.rows)
            .filter(|&i| h.row(i).iter().all(|x| x.is_zero()))
            .collect();
        let mut out = ZMat::zeros(zero_rows.len(), self.rows);
        for (oi, &i) in zero_rows.iter().enumerate() {
            for j in 0..self.rows {
                out.set(oi, j, u.get(i, j).clone());
            }
        }
        out
    }

    /// Basis of the right kernel lattice { x in Z^cols : self . x^T = 0 }.
    pub fn right_kernel(&self) -> ZMat {
        self.transpose().left_kernel()
    }

    /// Saturation of the row space: an integer row basis S with the same
    /// Q-span as `self` and Z^cols / rowspace(S) torsion-free.
    pub fn saturate_rows(&self) -> ZMat {
        // rowspace(self)^perp as a saturated lattice, then its perp again
        let rk = self.right_kernel(); // rows span { x : self x = 0 }
        rk.right_kernel()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det_bareiss(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m.get(k, k).is_zero() {
                let Some(sw) = (k + 1..n).find(|&i| !m.get(i, k).is_zero()) else {
                    return BigInt::zero();
                };
                m.swap_rows(k, sw);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j)) / &prev;
                    m.set(i, j, v);
                }
                m.set(i, k, BigInt::zero());
            }
            prev = m.get(k, k).clone();
        }
        let d = m.get(n - 1, n - 1).clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    /// Characteristic polynomial, constant term first, by Faddeev-LeVerrier.
    /// All divisions are exact for integer matrices; checked.
    pub fn charpoly(&self) -> Vec<BigInt> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return vec![BigInt::one()];
        }
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        let mut m = self.clone(); // M_1 = A
        for k in 1..=n {
            let tr: BigInt = (0..n).map(|i| m.get(i, i).clone()).sum();
            let (c, rem) = num_integer::div_rem(-tr, BigInt::from(k as u64));
            assert!(rem.is_zero(), "Faddeev-LeVerrier division not exact");
            coeffs[n - k] = c.clone();
            if k < n {
                // M_{k+1} = A (M_k + c I)
                let mut mk = m;
                for i in 0..n {
                    let v = mk.get(i, i) + &c;
                    mk.set(i, i, v);
                }
                m = self.mul(&mk);
            }
        }
        coeffs
    }

    pub fn mod_ell(&self, ell: u64) -> GfMat {
        let m = BigInt::from(ell);
        let mut g = GfMat::zeros(ell, self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let r = num_integer::Integer::mod_floor(self.get(i, j), &m);
                g.set(i, j, num_traits::ToPrimitive::to_u64(&r).unwrap());
            }
        }
        g
    }
}

fn div_floor_big(a: &BigInt, b: &BigInt) -> BigInt {
    num_integer::Integer::div_floor(a, b)
}

// ---------------------------------------------------------------------------
// GfMat
// ---------------------------------------------------------------------------

/// Dense matrix over F_ell (ell prime, ell < 2^31).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GfMat {
    pub ell: u64,
    pub rows: usize,
    pub cols: usize,
    data: Vec<u64>,
}

impl GfMat {
    pub fn zeros(ell: u64, rows: usize, cols: usize) -> Self {
        GfMat {
            ell,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(ell: u64, n: usize) -> Self {
        let mut m = GfMat::zeros(ell, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.ell;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn mul(&self, other: &GfMat) -> GfMat {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.ell, other.ell);
        let ell = self.ell;
        let mut out = GfMat::zeros(ell, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b == 0 {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = (out.data[idx] + a * b) % ell;
                }
            }
        }
        out
    }

    /// self - t * I.
    pub fn sub_scalar_identity(&self, t: u64) -> GfMat {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        let t = t % self.ell;
        for i in 0..self.rows {
            let v = (m.get(i, i) + self.ell - t) % self.ell;
            m.set(i, i, v);
        }
        m
    }

    pub fn rref(&mut self) -> Vec<usize> {
        let ell = self.ell;
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            for j in 0..self.cols {
                self.data.swap(r * self.cols + j, pr * self.cols + j);
            }
            let inv = inv_mod_u64(self.get(r, c), ell).expect("pivot invertible");
            for j in c..self.cols {
                let v = self.get(r, j) * inv % ell;
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i != r && self.get(i, c) != 0 {
                    let f = self.get(i, c);
                    for j in c..self.cols {
                        let v = (self.get(i, j) + (ell - f) * self.get(r, j)) % ell;
                        self.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis (rows) of { x : self . x^T = 0 } over F_ell.
    pub fn right_kernel(&self) -> GfMat {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = GfMat::zeros(self.ell, free.len(), self.cols);
        for (bi, &fc) in free.iter().enumerate() {
            basis.set(bi, fc, 1);
            for (pi, &pc) in pivots.iter().enumerate() {
                let v = (self.ell - m.get(pi, fc)) % self.ell;
                basis.set(bi, pc, v);
            }
        }
        basis
    }

    pub fn row_kernel(&self) -> GfMat {
        self.transpose().right_kernel()
    }

    pub fn transpose(&self) -> GfMat {
        let mut t = GfMat::zeros(self.ell, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn qm(rows: &[&[i64]]) -> QMat {
        QMat::from_rows(
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|&x| BigRational::from(BigInt::from(x)))
                        .collect()
                })
                .collect(),
        )
    }

    fn zm(rows: &[&[i64]]) -> ZMat {
        ZMat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    #[test]
    fn rref_and_kernel() {
        let m = qm(&[&[1, 2, 3], &[2, 4, 6], &[1, 1, 1]]);
        assert_eq!(m.rank(), 2);
        let k = m.right_kernel();
        assert_eq!(k.rows, 1);
        // kernel vector satisfies m . x = 0
        let prod = m.mul(&k.transpose());
        assert!(prod.is_zero());
    }

    #[test]
    fn solve_left_roundtrip() {
        let basis = qm(&[&[1, 0, 2], &[0, 3, 1]]);
        let x = qm(&[&[2, 1], &[1, 1], &[0, 5]]);
        let rhs = x.mul(&basis);
        let sol = basis.solve_left(&rhs).expect("solvable");
        assert_eq!(sol.mul(&basis), rhs);
        // a row outside the row space must fail
        let bad = qm(&[&[1, 1, 1]]);
        assert!(basis.solve_left(&bad).is_none());
    }

    #[test]
    fn hnf_left_kernel_is_saturated() {
        // rows (2,4), (1,2): kernel of x . m = 0 is spanned by (1,-2)
        let m = zm(&[&[2, 4], &[1, 2]]);
        let k = m.left_kernel();
        assert_eq!(k.rows, 1);
        let r = k.row(0);
        let g = num_integer::gcd(r[0].clone(), r[1].clone());
        assert_eq!(g, BigInt::from(1u32), "kernel basis must be primitive");
        assert!(k.mul(&m).data.iter().all(|x| x.is_zero()));
    }

    #[test]
    fn saturation_divides_out_index() {
        // row space spanned by (2, 0, 2) and (0, 4, 4): saturation contains (1,0,1), (0,1,1)
        let m = zm(&[&[2, 0, 2], &[0, 4, 4]]);
        let s = m.saturate_rows();
        assert_eq!(s.rows, 2);
        let h = s.hnf_basis();
        assert_eq!(h, zm(&[&[1, 0, 1], &[0, 1, 1]]));
    }

    #[test]
    fn bareiss_det() {
        let m = zm(&[&[2, 0, 1], &[1, 3, 2], &[0, 1, 4]]);
        // det = 2*(12-2) - 0 + 1*(1-0) = 21
        assert_eq!(m.det_bareiss(), BigInt::from(21));
        let singular = zm(&[&[1, 2], &[2, 4]]);
        assert_eq!(singular.det_bareiss(), BigInt::from(0));
    }

    #[test]
    fn charpoly_companion() {
        // companion matrix of x^3 - 2x - 5
        let m = zm(&[&[0, 1, 0], &[0, 0, 1], &[5, 2, 0]]);
        let cp = m.charpoly();
        let expect: Vec<BigInt> = [-5i64, -2, 0, 1].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(cp, expect);
    }

    #[test]
    fn charpoly_matches_det_of_shifts() {
        // p(t) = det(tI - A) as a sanity check at a few integer points
        let a = zm(&[&[1, 2, 0], &[0, -1, 3], &[2, 0, 1]]);
        let cp = a.charpoly();
        for t in -3i64..=3 {
            let mut shifted = ZMat::identity(3);
            for i in 0..3 {
                for j in 0..3 {
                    let v = if i == j {
                        BigInt::from(t) - a.get(i, j)
                    } else {
                        -a.get(i, j).clone()
                    };
                    shifted.set(i, j, v);
                }
            }
            let lhs = shifted.det_bareiss();
            let rhs: BigInt = cp
                .iter()
                .enumerate()
                .map(|(k, c)| c * BigInt::from(t).pow(k as u32))
                .sum();
            assert_eq!(lhs, rhs, "t = {t}");
        }
    }

    #[test]
    fn gf_rref_kernel() {
        let mut m = GfMat::zeros(5, 2, 3);
        m.set(0, 0, 1);
        m.set(0, 1, 2);
        m.set(0, 2, 3);
        m.set(1, 0, 2);
        m.set(1, 1, 4);
        m.set(1, 2, 2);
        assert_eq!(m.rank(), 2);
        let k = m.right_kernel();
        assert_eq!(k.rows, 1);
        let prod = m.mul(&k.transpose());
        assert!(prod.is_zero());
    }
}
