//! Weight-2 modular symbols for Gamma_0(M) with exact rational arithmetic.
//!
//! The space is presented on Manin symbols: one generator per point of
//! P^1(Z/M), modulo the two-term relation x + xS = 0 and the three-term
//! relation x + xT + xT^2 = 0, where S = [[0,-1],[1,0]] and T = [[0,-1],[1,-1]]
//! act on the right of the row (c, d).  A Manin symbol (c : d) corresponds to
//! the modular symbol {g0, g oo} for any SL2(Z)-lift g with bottom row (c, d).
//!
//! The quotient dimension is checked against the genus formula for X_0(M):
//! dim = 2g + (number of cusps) - 1, and the cuspidal subspace (kernel of the
//! boundary map to the free module on cusp classes) must have dimension 2g.
//! Building a space whose relation quotient disagrees with the formula is an
//! error, never a warning.
//!
//! Hecke operators T_q for q not dividing M are computed by the classical
//! determinant-q matrix family with the drop rule (terms leaving P^1 are
//! omitted); U_q for q dividing M is computed from the coset decomposition
//! {z -> (z + j)/q}.  Both have an independent cross-check: conversion of
//! modular symbols {a, b} to Manin symbols via continued-fraction convergents
//! gives a second, slower evaluation of the same operator, and the two must
//! agree exactly.
//!
//! On top of the rational theory sits the integral structure: the lattice
//! generated by all Manin symbols, its saturated intersection with a Hecke
//! stable subspace, integral matrices of Hecke operators on that lattice, and
//! reductions mod ell.  The eigensystem witness search works there: it
//! intersects kernels of T_q - t_q over F_ell on the new subspace and returns
//! an independently re-checkable certificate.

pub mod p1;

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{factor_u64, gcd_u64, is_prime_u64, legendre_u64};
use crate::error::{Error, Result};
use crate::linalg::{GfMat, QMat, ZMat};
use p1::{lift_to_sl2, normalize, p1_list};

// ---------------------------------------------------------------------------
// Genus data for X_0(M)
// ---------------------------------------------------------------------------

/// Index, elliptic point counts, cusp count, and genus of X_0(M).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LevelInvariants {
    pub level: u64,
    pub index: u64,
    pub nu2: u64,
    pub nu3: u64,
    pub cusps: u64,
    pub genus: u64,
}

fn euler_phi(n: u64) -> u64 {
    let mut phi = n;
    for (p, _) in factor_u64(n) {
        phi = phi / p * (p - 1);
    }
    phi
}

fn chi4(p: u64) -> i64 {
    match p % 4 {
        1 => 1,
        3 => -1,
        _ => 0,
    }
}

fn chi3(p: u64) -> i64 {
    match p % 3 {
        1 => 1,
        2 => -1,
        _ => 0,
    }
}

/// Genus-formula invariants of X_0(M), computed from the factorization of M
/// alone (no modular symbols), so they can serve as an independent check.
pub fn level_invariants(m: u64) -> LevelInvariants {
    assert!(m >= 1);
    let fac = factor_u64(m);
    let mut index = m;
    for &(p, _) in &fac {
        index = index / p * (p + 1);
    }
    let nu2 = if m % 4 == 0 {
        0
    } else {
        fac.iter()
            .map(|&(p, _)| 1 + chi4(p))
            .product::<i64>() as u64
    };
    let nu3 = if m % 9 == 0 {
        0
    } else {
        fac.iter()
            .map(|&(p, _)| 1 + chi3(p))
            .product::<i64>() as u64
    };
    let mut cusps = 0u64;
    for d in 1..=m {
        if m % d == 0 {
            cusps += euler_phi(gcd_u64(d, m / d));
        }
    }
    let twelve_g = 12 + index as i64 - 3 * nu2 as i64 - 4 * nu3 as i64 - 6 * cusps as i64;
    assert!(twelve_g >= 0 && twelve_g % 12 == 0, "genus formula not integral at {m}");
    LevelInvariants {
        level: m,
        index,
        nu2,
        nu3,
        cusps,
        genus: (twelve_g / 12) as u64,
    }
}

// ---------------------------------------------------------------------------
// Cusps
// ---------------------------------------------------------------------------

/// Reduce a cusp a/b to lowest terms with b >= 0; infinity is (1, 0).
pub fn reduce_cusp(c: (i64, i64)) -> (i64, i64) {
    let (mut a, mut b) = c;
    assert!(a != 0 || b != 0, "0/0 is not a cusp");
    if b == 0 {
        return (1, 0);
    }
    let g = gcd_u64(a.unsigned_abs(), b.unsigned_abs()) as i64;
    a /= g;
    b /= g;
    if b < 0 {
        a = -a;
        b = -b;
    }
    (a, b)
}

/// Gamma_0(n)-equivalence of cusps: a1/b1 ~ a2/b2 exactly when
/// s1*b2 = s2*b1 mod gcd(b1*b2, n), where s_i inverts a_i mod b_i.
pub fn cusps_equivalent(n: u64, c1: (i64, i64), c2: (i64, i64)) -> bool {
    let (a1, b1) = reduce_cusp(c1);
    let (a2, b2) = reduce_cusp(c2);
    let s1 = invert_mod_cusp(a1, b1);
    let s2 = invert_mod_cusp(a2, b2);
    let g = gcd_u64((b1 * b2).unsigned_abs(), n) as i64;
    (s1 * b2 - s2 * b1).rem_euclid(g.max(1)) == 0
}

/// s with s*a = 1 mod b (b >= 0; for b = 0 the cusp is infinity and s = 1).
fn invert_mod_cusp(a: i64, b: i64) -> i64 {
    if b == 0 {
        return 1;
    }
    if b == 1 {
        return 0;
    }
    let (mut r0, mut r1) = (a.rem_euclid(b), b);
    let (mut s0, mut s1) = (1i64, 0i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0.abs(), 1, "cusp not in lowest terms: {a}/{b}");
    (s0 * r0.signum()).rem_euclid(b)
}

// ---------------------------------------------------------------------------
// The space
// ---------------------------------------------------------------------------

/// Weight-2 modular symbols for Gamma_0(level), with the boundary map and
/// cuspidal subspace precomputed.  Vectors are rows in the coordinates of the
/// free Manin generators; operators act on the right.
pub struct ModularSymbolSpace {
    pub level: u64,
    pub invariants: LevelInvariants,
    /// Canonical representatives of P^1(Z/level), sorted.
    pub symbols: Vec<(u64, u64)>,
    index: HashMap<(u64, u64), usize>,
    /// Row i expresses Manin symbol i in the free-generator basis.
    pub manin_expr: QMat,
    /// Symbol index of each free generator; `manin_expr` has an identity row there.
    pub free_symbols: Vec<usize>,
    pub dim_full: usize,
    pub dim_cuspidal: usize,
    /// Representatives of the cusp classes, in first-seen order.
    pub cusp_reps: Vec<(i64, i64)>,
    /// dim_full x cusps matrix of the boundary map.
    pub boundary: QMat,
    /// Rows form a basis of the kernel of the boundary map.
    pub cuspidal_basis: QMat,
}

impl ModularSymbolSpace {
    pub fn build(level: u64) -> Result<ModularSymbolSpace> {
        assert!(level >= 1, "level must be positive");
        let inv = level_invariants(level);
        let symbols = p1_list(level);
        let n = symbols.len();
        let index: HashMap<(u64, u64), usize> =
            symbols.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let at = |i: usize, m: [i64; 4]| -> usize {
            let (c, d) = symbols[i];
            let (c, d) = (c as i64, d as i64);
            let pt = normalize(level, c * m[0] + d * m[2], c * m[1] + d * m[3])
                .expect("unimodular action preserves P^1");
            index[&pt]
        };
        const S: [i64; 4] = [0, -1, 1, 0];
        const T: [i64; 4] = [0, -1, 1, -1];

        // Two-term relations: pair each symbol with its S-image.  A fixed
        // point forces the symbol to zero.  sign[i] = (generator, +-1), or
        // None when the symbol is zero.
        let mut gens: Vec<usize> = Vec::new();
        let mut smap: Vec<Option<(usize, i64)>> = vec![Some((usize::MAX, 0)); n];
        let mut s_seen = vec![false; n];
        for i in 0..n {
            if s_seen[i] {
                continue;
            }
            let j = at(i, S);
            if j == i {
                smap[i] = None;
                s_seen[i] = true;
            } else {
                let g = gens.len();
                gens.push(i);
                smap[i] = Some((g, 1));
                smap[j] = Some((g, -1));
                s_seen[i] = true;
                s_seen[j] = true;
            }
        }
        let ngens = gens.len();

        // Three-term relations, one per T-orbit, rewritten over the generators.
        let mut rows: Vec<Vec<BigRational>> = Vec::new();
        let mut t_seen = vec![false; n];
        for i in 0..n {
            if t_seen[i] {
                continue;
            }
            let j = at(i, T);
            let k = at(j, T);
            let orbit: Vec<usize> = if j == i {
                vec![i]
            } else {
                assert!(k != i && at(k, T) == i, "T must have order 3 on P^1");
                vec![i, j, k]
            };
            let mut row = vec![BigRational::zero(); ngens];
            let weight = if orbit.len() == 1 { 3i64 } else { 1 };
            for &s in &orbit {
                t_seen[s] = true;
                if let Some((g, sg)) = smap[s] {
                    row[g] += BigRational::from(BigInt::from(weight * sg));
                }
            }
            rows.push(row);
        }
        let mut rel = QMat::from_rows(if rows.is_empty() {
            vec![vec![]]
        } else {
            rows
        });
        if rel.cols != ngens {
            rel = QMat::zeros(rel.rows, ngens);
        }
        let pivots = rel.rref();
        let free_cols: Vec<usize> = (0..ngens).filter(|c| !pivots.contains(c)).collect();
        let dim_full = free_cols.len();

        // expected dimension from the genus formula
        let expected = (2 * inv.genus + inv.cusps - 1) as usize;
        if dim_full != expected {
            return Err(Error::DimensionMismatch {
                level,
                computed: dim_full,
                expected,
            });
        }

        // gen_expr: each generator in the free basis
        let col_of_free: HashMap<usize, usize> =
            free_cols.iter().enumerate().map(|(k, &c)| (c, k)).collect();
        let mut gen_expr = QMat::zeros(ngens, dim_full);
        for (k, &c) in free_cols.iter().enumerate() {
            gen_expr.set(c, k, BigRational::one());
        }
        for (r, &pc) in pivots.iter().enumerate() {
            for (&fc, &k) in &col_of_free {
                let v = -rel.get(r, fc).clone();
                if !v.is_zero() {
                    gen_expr.set(pc, k, v);
                }
            }
        }

        // manin_expr: each symbol in the free basis
        let mut manin_expr = QMat::zeros(n, dim_full);
        for i in 0..n {
            if let Some((g, sg)) = smap[i] {
                for k in 0..dim_full {
                    let v = gen_expr.get(g, k);
                    if !v.is_zero() {
                        let signed = if sg < 0 { -v.clone() } else { v.clone() };
                        manin_expr.set(i, k, signed);
                    }
                }
            }
        }
        let free_symbols: Vec<usize> = free_cols.iter().map(|&c| gens[c]).collect();

        // Cusp classes, collected from the endpoints of every symbol so no
        // class can be missed; the count must match the formula.
        let mut cusp_reps: Vec<(i64, i64)> = Vec::new();
        let class_of = |cusp: (i64, i64), reps: &mut Vec<(i64, i64)>| -> usize {
            let cusp = reduce_cusp(cusp);
            for (ci, &r) in reps.iter().enumerate() {
                if cusps_equivalent(level, r, cusp) {
                    return ci;
                }
            }
            reps.push(cusp);
            reps.len() - 1
        };
        let lifts: Vec<[i64; 4]> = symbols
            .iter()
            .map(|&(c, d)| lift_to_sl2(level, c, d))
            .collect();
        for &[a, b, c, d] in &lifts {
            class_of((a, c), &mut cusp_reps);
            class_of((b, d), &mut cusp_reps);
        }
        if cusp_reps.len() as u64 != inv.cusps {
            return Err(Error::Internal(format!(
                "cusp class count {} disagrees with formula {} at level {level}",
                cusp_reps.len(),
                inv.cusps
            )));
        }

        // Boundary map on the free generators: {g0, g oo} -> [g oo] - [g0].
        let mut boundary = QMat::zeros(dim_full, cusp_reps.len());
        for (k, &si) in free_symbols.iter().enumerate() {
            let [a, b, c, d] = lifts[si];
            let ci = class_of((a, c), &mut cusp_reps);
            let cj = class_of((b, d), &mut cusp_reps);
            let v = boundary.get(k, ci) + BigRational::one();
            boundary.set(k, ci, v);
            let v = boundary.get(k, cj) - BigRational::one();
            boundary.set(k, cj, v);
        }
        let cuspidal_basis = boundary.row_kernel();
        let dim_cuspidal = cuspidal_basis.rows;
        if dim_cuspidal != (2 * inv.genus) as usize {
            return Err(Error::DimensionMismatch {
                level,
                computed: dim_cuspidal,
                expected: (2 * inv.genus) as usize,
            });
        }

        Ok(ModularSymbolSpace {
            level,
            invariants: inv,
            symbols,
            index,
            manin_expr,
            free_symbols,
            dim_full,
            dim_cuspidal,
            cusp_reps,
            boundary,
            cuspidal_basis,
        })
    }

    fn symbol_at(&self, c: i64, d: i64) -> Option<usize> {
        normalize(self.level, c, d).map(|pt| self.index[&pt])
    }

    // -----------------------------------------------------------------------
    // Modular symbols {a, b} as Manin combinations
    // -----------------------------------------------------------------------

    /// The path {oo, r} as a signed combination of Manin symbols, via the
    /// continued-fraction convergents of r.  `r` is (numerator, denominator);
    /// denominator 0 means oo and gives the empty path.
    fn path_from_infinity(&self, r: (i64, i64)) -> Vec<(usize, i64)> {
        let (p, q) = r;
        assert!(p != 0 || q != 0, "0/0 endpoint");
        if q == 0 {
            return Vec::new();
        }
        let (p, q) = reduce_cusp((p, q));
        let mut out = Vec::new();
        // convergents p_k/q_k of p/q; piece k is the symbol (sigma*q_k : q_{k-1})
        // with sigma = (-1)^(k-1), starting from p_{-1}/q_{-1} = 1/0.
        let (mut pm2, mut qm2) = (0i64, 1i64);
        let (mut pm1, mut qm1) = (1i64, 0i64);
        let (mut num, mut den) = (p, q);
        let mut k = 0usize;
        while den != 0 {
            let a = num.div_euclid(den);
            let pk = a * pm1 + pm2;
            let qk = a * qm1 + qm2;
            let sigma = if k % 2 == 0 { -1 } else { 1 };
            let idx = self
                .symbol_at(sigma * qk, qm1)
                .expect("consecutive convergents are coprime");
            out.push((idx, 1));
            (pm2, qm2) = (pm1, qm1);
            (pm1, qm1) = (pk, qk);
            let rem = num - a * den;
            (num, den) = (den, rem);
            k += 1;
        }
        debug_assert_eq!((pm1, qm1), (p, q), "convergents must land on the input");
        out
    }

    /// The modular symbol {from, to} as a signed combination of Manin symbols.
    /// Endpoints are rationals (numerator, denominator), with (x, 0) = oo.
    pub fn modular_symbol(&self, from: (i64, i64), to: (i64, i64)) -> Vec<(usize, i64)> {
        let mut combo = self.path_from_infinity(to);
        for (idx, c) in self.path_from_infinity(from) {
            combo.push((idx, -c));
        }
        combo
    }

    /// Coordinates (in the free basis) of a signed combination of Manin symbols.
    pub fn combo_coords(&self, combo: &[(usize, i64)]) -> Vec<BigRational> {
        let mut acc = vec![BigRational::zero(); self.dim_full];
        for &(idx, c) in combo {
            if c == 0 {
                continue;
            }
            let c = BigRational::from(BigInt::from(c));
            for (j, v) in self.manin_expr.row(idx).iter().enumerate() {
                if !v.is_zero() {
                    acc[j] += &c * v;
                }
            }
        }
        acc
    }

    // -----------------------------------------------------------------------
    // Hecke operators
    // -----------------------------------------------------------------------

    /// Matrix of the Hecke operator at the prime q on the full quotient:
    /// T_q when q does not divide the level, U_q when it does.  Rows are
    /// images of the free generators; operators act on the right of rows.
    pub fn hecke_matrix(&self, q: u64) -> Result<QMat> {
        if !is_prime_u64(q) {
            return Err(Error::PreconditionFailed(format!(
                "Hecke operator asked at non-prime index {q}"
            )));
        }
        if self.level % q == 0 {
            self.hecke_from_paths(q)
        } else {
            Ok(self.hecke_from_merel(q))
        }
    }

    /// T_q via the determinant-q matrix family acting on Manin symbols, with
    /// the drop rule for images leaving P^1.  Requires q coprime to the level.
    fn hecke_from_merel(&self, q: u64) -> QMat {
        let hs = merel_matrices(q);
        let mut rows = Vec::with_capacity(self.dim_full);
        for &si in &self.free_symbols {
            let (c, d) = self.symbols[si];
            let (c, d) = (c as i64, d as i64);
            let mut acc = vec![BigRational::zero(); self.dim_full];
            for h in &hs {
                let Some(j) = self.symbol_at(c * h[0] + d * h[2], c * h[1] + d * h[3]) else {
                    continue;
                };
                for (col, v) in self.manin_expr.row(j).iter().enumerate() {
                    if !v.is_zero() {
                        acc[col] += v;
                    }
                }
            }
            rows.push(acc);
        }
        if self.dim_full == 0 {
            return QMat::zeros(0, 0);
        }
        QMat::from_rows(rows)
    }

    /// The same operator evaluated on modular symbols through the coset
    /// decomposition: T_q {a,b} = {qa, qb} + sum_j {(a+j)/q, (b+j)/q}, with
    /// the first term omitted when q divides the level (that is U_q).  Slower;
    /// used as an independent cross-check of `hecke_matrix` and as the
    /// production route for U_q.
    pub fn hecke_from_paths(&self, q: u64) -> Result<QMat> {
        if !is_prime_u64(q) {
            return Err(Error::PreconditionFailed(format!(
                "Hecke operator asked at non-prime index {q}"
            )));
        }
        let qi = q as i64;
        let mut rows = Vec::with_capacity(self.dim_full);
        for &si in &self.free_symbols {
            let [a, b, c, d] = lift_to_sl2(self.level, self.symbols[si].0, self.symbols[si].1);
            // Manin symbol (c : d) is the path {b/d, a/c}
            let alpha = (b, d);
            let beta = (a, c);
            let mut combo: Vec<(usize, i64)> = Vec::new();
            if self.level % q != 0 {
                combo.extend(self.modular_symbol((qi * alpha.0, alpha.1), (qi * beta.0, beta.1)));
            }
            for j in 0..qi {
                let aj = (alpha.0 + j * alpha.1, qi * alpha.1);
                let bj = (beta.0 + j * beta.1, qi * beta.1);
                combo.extend(self.modular_symbol(aj, bj));
            }
            rows.push(self.combo_coords(&combo));
        }
        if self.dim_full == 0 {
            return Ok(QMat::zeros(0, 0));
        }
        Ok(QMat::from_rows(rows))
    }

    // -----------------------------------------------------------------------
    // Degeneracy maps and the new subspace
    // -----------------------------------------------------------------------

    /// Matrix of the degeneracy map to a space of level M/q (q prime), either
    /// the inclusion-induced map (d = 1) or the one twisting by z -> qz
    /// (d = q).  Rows are images of the free generators of `self`.
    pub fn degeneracy_matrix(&self, target: &ModularSymbolSpace, d: u64) -> Result<QMat> {
        if self.level % target.level != 0 {
            return Err(Error::LevelMismatch(format!(
                "no degeneracy map from level {} to non-divisor level {}",
                self.level, target.level
            )));
        }
        let q = self.level / target.level;
        if !is_prime_u64(q) {
            return Err(Error::LevelMismatch(format!(
                "level ratio {q} must be prime for a one-step degeneracy map"
            )));
        }
        if d != 1 && d != q {
            return Err(Error::LevelMismatch(format!(
                "degeneracy parameter {d} must be 1 or the level ratio {q}"
            )));
        }
        let di = d as i64;
        let mut out = QMat::zeros(self.dim_full, target.dim_full);
        for (k, &si) in self.free_symbols.iter().enumerate() {
            let [a, b, c, dd] = lift_to_sl2(self.level, self.symbols[si].0, self.symbols[si].1);
            let combo = target.modular_symbol((di * b, dd), (di * a, c));
            for (j, v) in target.combo_coords(&combo).into_iter().enumerate() {
                out.set(k, j, v);
            }
        }
        Ok(out)
    }

    /// Basis (rows) of the new subspace: the joint kernel, inside the cuspidal
    /// subspace, of both degeneracy maps to every level M/q over primes q | M.
    pub fn new_subspace_basis(&self) -> Result<QMat> {
        let mut constraints = self.boundary.clone();
        for (q, _) in factor_u64(self.level) {
            let target = ModularSymbolSpace::build(self.level / q)?;
            constraints = constraints.hstack(&self.degeneracy_matrix(&target, 1)?);
            constraints = constraints.hstack(&self.degeneracy_matrix(&target, q)?);
        }
        Ok(constraints.row_kernel())
    }

    // -----------------------------------------------------------------------
    // Integral structure
    // -----------------------------------------------------------------------

    /// Basis (rows) of the lattice generated by all Manin symbols inside the
    /// full quotient.  Full rank: the free generators give identity rows.
    pub fn ambient_lattice_basis(&self) -> QMat {
        let (z, den) = self.manin_expr.clear_denominators();
        let h = z.hnf_basis();
        let den = BigRational::from(den);
        let mut out = QMat::zeros(h.rows, h.cols);
        for i in 0..h.rows {
            for j in 0..h.cols {
                out.set(i, j, BigRational::from(h.get(i, j).clone()) / &den);
            }
        }
        out
    }

    /// Basis (rows) of the intersection of a Q-subspace with the Manin symbol
    /// lattice; the result is a saturated lattice of rank dim(subspace).
    pub fn integral_lattice(&self, subspace: &QMat) -> Result<QMat> {
        let ambient = self.ambient_lattice_basis();
        let coords = ambient.solve_left(subspace).ok_or_else(|| {
            Error::Internal("subspace does not lie in the ambient space".into())
        })?;
        let (z, _den) = coords.clear_denominators();
        let saturated = z.saturate_rows();
        Ok(saturated.to_qmat().mul(&ambient))
    }

    /// Integer matrix Y of an operator on a lattice: Y * L = L * op, where the
    /// rows of L are the lattice basis.  Errors if the operator does not
    /// preserve the lattice integrally.
    pub fn integral_operator(lattice: &QMat, op: &QMat) -> Result<ZMat> {
        let rhs = lattice.mul(op);
        let y = lattice.solve_left(&rhs).ok_or_else(|| {
            Error::Internal("operator does not preserve the subspace".into())
        })?;
        let (z, den) = y.clear_denominators();
        if !den.is_one() {
            return Err(Error::Internal(format!(
                "operator is not integral on the lattice (denominator {den})"
            )));
        }
        Ok(z)
    }
}

// ---------------------------------------------------------------------------
// Determinant-n matrix family for the Manin-symbol Hecke action
// ---------------------------------------------------------------------------

/// The family of integer matrices [[a,b],[c,d]] with determinant n, a > b >= 0
/// and d > c >= 0, sorted lexicographically.  Summing the right action of this
/// family over Manin symbols (dropping images outside P^1) computes T_n.
pub fn merel_matrices(n: u64) -> Vec<[i64; 4]> {
    let n = n as i64;
    let mut out = Vec::new();
    for a in 1..=n {
        for d in 1..=n {
            let bc = a * d - n;
            if bc < 0 {
                continue;
            }
            if bc == 0 {
                for c in 0..d {
                    out.push([a, 0, c, d]);
                }
                for b in 1..a {
                    out.push([a, b, 0, d]);
                }
            } else {
                for b in 1..a {
                    if bc % b == 0 {
                        let c = bc / b;
                        if c < d {
                            out.push([a, b, c, d]);
                        }
                    }
                }
            }
        }
    }
    out.sort_unstable();
    out
}

// ---------------------------------------------------------------------------
// Eigensystem witnesses
// ---------------------------------------------------------------------------

/// Certificate that a nonzero vector in the mod-ell new subspace is a joint
/// eigenvector with the requested eigenvalues.  All data needed to re-check
/// the claim by matrix multiplication is included.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigensystemWitness {
    pub level: u64,
    pub ell: u64,
    /// Target eigenvalues (q, t_q) for T_q, q prime to level and ell.
    pub targets: Vec<(u64, i64)>,
    /// Optional (p, t_p) target for U_p at a prime p dividing the level.
    pub up_target: Option<(u64, i64)>,
    /// Largest Hecke index pinned by the targets.
    pub coefficient_bound: u64,
    /// Rank of the integral new-subspace lattice the search ran in.
    pub new_dimension: usize,
    pub kernel_dimension: usize,
    /// Kernel basis rows over F_ell, in the coordinates of the lattice basis.
    pub basis: Vec<Vec<u64>>,
    /// Mod-2 eigensystems do not pin down signs, so a witness at ell = 2 is
    /// congruence evidence rather than a full match of eigenvalue data.
    pub mod_two_caveat: bool,
}

fn witness_operators(
    space: &ModularSymbolSpace,
    ell: u64,
    targets: &[(u64, i64)],
    up: Option<(u64, i64)>,
) -> Result<(QMat, Vec<(u64, u64, GfMat)>)> {
    if !is_prime_u64(ell) {
        return Err(Error::PreconditionFailed(format!("ell = {ell} must be prime")));
    }
    if targets.is_empty() {
        return Err(Error::PreconditionFailed(
            "at least one Hecke eigenvalue target is required".into(),
        ));
    }
    for &(q, _) in targets {
        if !is_prime_u64(q) {
            return Err(Error::PreconditionFailed(format!("target index {q} must be prime")));
        }
        if space.level % q == 0 || q == ell {
            return Err(Error::PreconditionFailed(format!(
                "target prime {q} must not divide level * ell = {} * {ell}",
                space.level
            )));
        }
    }
    if let Some((p, _)) = up {
        if !is_prime_u64(p) || space.level % p != 0 {
            return Err(Error::PreconditionFailed(format!(
                "U_p target needs a prime p dividing the level, got {p}"
            )));
        }
    }
    let new_basis = space.new_subspace_basis()?;
    let lattice = space.integral_lattice(&new_basis)?;
    let mut ops = Vec::new();
    let push_op = |q: u64, t: i64, ops: &mut Vec<(u64, u64, GfMat)>| -> Result<()> {
        let mat = space.hecke_matrix(q)?;
        let y = ModularSymbolSpace::integral_operator(&lattice, &mat)?;
        let tbar = t.rem_euclid(ell as i64) as u64;
        ops.push((q, tbar, y.mod_ell(ell)));
        Ok(())
    };
    for &(q, t) in targets {
        push_op(q, t, &mut ops)?;
    }
    if let Some((p, t)) = up {
        push_op(p, t, &mut ops)?;
    }
    Ok((lattice, ops))
}

/// Search the mod-ell new subspace at `space.level` for a nonzero joint
/// eigenvector with T_q = t_q for every target (and U_p = t_p if given).
/// Returns a re-checkable witness, or NotFound when the joint kernel is zero.
pub fn congruence_witness(
    space: &ModularSymbolSpace,
    ell: u64,
    targets: &[(u64, i64)],
    up: Option<(u64, i64)>,
) -> Result<EigensystemWitness> {
    let (lattice, ops) = witness_operators(space, ell, targets, up)?;
    let k = lattice.rows;
    if k == 0 {
        return Err(Error::NotFound(format!(
            "new subspace at level {} is zero",
            space.level
        )));
    }
    let mut stacked = GfMat::zeros(ell, k, k * ops.len());
    for (oi, (_, tbar, y)) in ops.iter().enumerate() {
        let shifted = y.sub_scalar_identity(*tbar);
        for i in 0..k {
            for j in 0..k {
                stacked.set(i, oi * k + j, shifted.get(i, j));
            }
        }
    }
    let kernel = stacked.row_kernel();
    if kernel.rows == 0 {
        return Err(Error::NotFound(format!(
            "no nonzero mod-{ell} eigensystem with the requested eigenvalues \
             in the new subspace at level {}",
            space.level
        )));
    }
    // re-check each kernel vector against each operator before certifying
    for i in 0..kernel.rows {
        let mut v = GfMat::zeros(ell, 1, k);
        for j in 0..k {
            v.set(0, j, kernel.get(i, j));
        }
        for (q, tbar, y) in &ops {
            let image = v.mul(y);
            for j in 0..k {
                if image.get(0, j) != tbar * v.get(0, j) % ell {
                    return Err(Error::CertificateFailure(format!(
                        "kernel vector {i} is not an eigenvector of operator at {q}"
                    )));
                }
            }
        }
    }
    Ok(EigensystemWitness {
        level: space.level,
        ell,
        targets: targets.to_vec(),
        up_target: up,
        coefficient_bound: targets
            .iter()
            .map(|&(q, _)| q)
            .chain(up.map(|(p, _)| p))
            .max()
            .unwrap_or(0),
        new_dimension: k,
        kernel_dimension: kernel.rows,
        basis: (0..kernel.rows).map(|i| kernel.row(i).to_vec()).collect(),
        mod_two_caveat: ell == 2,
    })
}

/// Re-check a witness from scratch: rebuild the integral operators and verify
/// every basis vector is nonzero and a joint eigenvector with the stated
/// eigenvalues.  Errors with CertificateFailure naming the failing sub-check.
pub fn verify_witness(space: &ModularSymbolSpace, w: &EigensystemWitness) -> Result<()> {
    if w.level != space.level {
        return Err(Error::LevelMismatch(format!(
            "witness is for level {}, space has level {}",
            w.level, space.level
        )));
    }
    let (lattice, ops) = witness_operators(space, w.ell, &w.targets, w.up_target)?;
    let k = lattice.rows;
    if w.new_dimension != k {
        return Err(Error::CertificateFailure(format!(
            "stated new-subspace rank {} differs from recomputed {k}",
            w.new_dimension
        )));
    }
    if w.basis.len() != w.kernel_dimension || w.basis.is_empty() {
        return Err(Error::CertificateFailure(
            "witness basis size disagrees with stated kernel dimension".into(),
        ));
    }
    for (i, row) in w.basis.iter().enumerate() {
        if row.len() != k {
            return Err(Error::CertificateFailure(format!(
                "basis vector {i} has wrong length"
            )));
        }
        if row.iter().all(|&x| x % w.ell == 0) {
            return Err(Error::CertificateFailure(format!("basis vector {i} is zero")));
        }
        let mut v = GfMat::zeros(w.ell, 1, k);
        for (j, &x) in row.iter().enumerate() {
            v.set(0, j, x);
        }
        for (q, tbar, y) in &ops {
            let image = v.mul(y);
            for j in 0..k {
                if image.get(0, j) != tbar * v.get(0, j) % w.ell {
                    return Err(Error::CertificateFailure(format!(
                        "basis vector {i} fails the eigenvalue check at {q}"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Eigenvalue data of the quadratic twist by the character of conductor q0:
/// each t_q picks up the Legendre symbol (q | q0); t at q0 itself is left as
/// is, since the twisted form has no clean eigenvalue there.
pub fn twist_eigensystem(targets: &[(u64, i64)], q0: u64) -> Vec<(u64, i64)> {
    targets
        .iter()
        .map(|&(q, t)| {
            if q == q0 {
                (q, t)
            } else {
                (q, legendre_u64(q as i64, q0) * t)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ec_arith::EllipticCurve;
    use crate::polyz;

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn cuspidal_charpoly(space: &ModularSymbolSpace, q: u64) -> Vec<BigInt> {
        let lattice = space.integral_lattice(&space.cuspidal_basis).unwrap();
        let op = space.hecke_matrix(q).unwrap();
        let y = ModularSymbolSpace::integral_operator(&lattice, &op).unwrap();
        y.charpoly()
    }

    #[test]
    fn dimensions_match_genus_formula() {
        // (level, genus, cusps): dim_full = 2g + cusps - 1, dim_cuspidal = 2g
        for (m, g, cusps) in [
            (1u64, 0u64, 1u64),
            (5, 0, 2),
            (7, 0, 2),
            (11, 1, 2),
            (14, 1, 4),
            (15, 1, 4),
            (43, 3, 2),
            (77, 7, 4),
        ] {
            let s = ModularSymbolSpace::build(m).unwrap();
            assert_eq!(s.invariants.genus, g, "genus at {m}");
            assert_eq!(s.invariants.cusps, cusps, "cusps at {m}");
            assert_eq!(s.dim_full, (2 * g + cusps - 1) as usize, "full dim at {m}");
            assert_eq!(s.dim_cuspidal, (2 * g) as usize, "cuspidal dim at {m}");
            assert_eq!(s.cusp_reps.len() as u64, cusps);
        }
    }

    #[test]
    fn level_215_dimensions() {
        let s = ModularSymbolSpace::build(215).unwrap();
        assert_eq!(s.invariants.genus, 21);
        assert_eq!(s.symbols.len(), 264);
        assert_eq!(s.dim_full, 45);
        assert_eq!(s.dim_cuspidal, 42);
    }

    #[test]
    fn path_conversion_basics() {
        let s = ModularSymbolSpace::build(11).unwrap();
        // {0, oo} equals the Manin symbol of the identity coset in the quotient
        let combo = s.modular_symbol((0, 1), (1, 0));
        let coords = s.combo_coords(&combo);
        let id = s.index[&(0, 1)];
        let direct = s.combo_coords(&[(id, 1)]);
        assert_eq!(coords, direct);
        // degenerate path collapses to zero
        let zero = s.combo_coords(&s.modular_symbol((1, 3), (1, 3)));
        assert!(zero.iter().all(|x| x.is_zero()));
    }

    #[test]
    fn paths_are_additive() {
        let s = ModularSymbolSpace::build(11).unwrap();
        let a = s.combo_coords(&s.modular_symbol((0, 1), (1, 3)));
        let b = s.combo_coords(&s.modular_symbol((1, 3), (1, 0)));
        let c = s.combo_coords(&s.modular_symbol((0, 1), (1, 0)));
        let sum: Vec<BigRational> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        assert_eq!(sum, c);
    }

    #[test]
    fn merel_family_small_counts() {
        assert_eq!(merel_matrices(1), vec![[1, 0, 0, 1]]);
        let m2 = merel_matrices(2);
        assert_eq!(m2.len(), 4);
        for h in &m2 {
            assert_eq!(h[0] * h[3] - h[1] * h[2], 2);
            assert!(h[0] > h[1] && h[1] >= 0);
            assert!(h[3] > h[2] && h[2] >= 0);
        }
    }

    #[test]
    fn hecke_charpolys_at_level_11() {
        let s = ModularSymbolSpace::build(11).unwrap();
        // on the cuspidal subspace, T_2 has charpoly (x+2)^2 and T_3 (x+1)^2
        assert_eq!(cuspidal_charpoly(&s, 2), vec![bi(4), bi(4), bi(1)]);
        assert_eq!(cuspidal_charpoly(&s, 3), vec![bi(1), bi(2), bi(1)]);
    }

    #[test]
    fn hecke_merel_matches_path_evaluation() {
        for (m, qs) in [
            (11u64, vec![2u64, 3, 5, 7, 13]),
            (14, vec![3, 5]),
            (15, vec![2, 7]),
            (43, vec![2, 3, 5]),
            (77, vec![2, 3]),
        ] {
            let s = ModularSymbolSpace::build(m).unwrap();
            for q in qs {
                let fast = s.hecke_matrix(q).unwrap();
                let slow = s.hecke_from_paths(q).unwrap();
                assert_eq!(fast, slow, "T_{q} at level {m}");
            }
        }
    }

    #[test]
    fn merel_family_also_computes_up() {
        // the determinant-q family with the drop rule gives U_q for q | M too
        for (m, qs) in [(14u64, vec![2u64, 7]), (15, vec![3, 5]), (77, vec![7, 11])] {
            let s = ModularSymbolSpace::build(m).unwrap();
            for q in qs {
                let from_paths = s.hecke_matrix(q).unwrap();
                let from_family = s.hecke_from_merel(q);
                assert_eq!(from_paths, from_family, "U_{q} at level {m}");
            }
        }
    }

    #[test]
    fn hecke_operators_commute() {
        let s = ModularSymbolSpace::build(77).unwrap();
        let t2 = s.hecke_matrix(2).unwrap();
        let t3 = s.hecke_matrix(3).unwrap();
        let u7 = s.hecke_matrix(7).unwrap();
        assert_eq!(t2.mul(&t3), t3.mul(&t2));
        assert_eq!(t2.mul(&u7), u7.mul(&t2));
    }

    #[test]
    fn up_is_scalar_on_new_part_of_level_14() {
        // the unique newform at level 14 has a_2 = -1 and a_3 = -2
        let s = ModularSymbolSpace::build(14).unwrap();
        assert_eq!(cuspidal_charpoly(&s, 2), vec![bi(1), bi(2), bi(1)]);
        assert_eq!(cuspidal_charpoly(&s, 3), vec![bi(4), bi(4), bi(1)]);
    }

    #[test]
    fn eichler_shimura_match_with_point_counts() {
        // charpoly of T_q on the cuspidal subspace is divisible by
        // (x - a_q(E))^2 for the curve of that conductor
        for (m, curve) in [
            (11u64, "[0,-1,1,-10,-20]"),
            (43, "[0,1,1,0,0]"),
        ] {
            let e: EllipticCurve = curve.parse().unwrap();
            let s = ModularSymbolSpace::build(m).unwrap();
            for q in [2u64, 3, 5, 7, 11, 13, 17, 19] {
                if m % q == 0 {
                    continue;
                }
                let aq = bi(e.ap(q).unwrap());
                let cp = cuspidal_charpoly(&s, q);
                assert!(
                    polyz::eval(&cp, &aq).is_zero(),
                    "a_{q} not a root at level {m}"
                );
                let dcp = polyz::derivative(&cp);
                assert!(
                    polyz::eval(&dcp, &aq).is_zero(),
                    "a_{q} not a double root at level {m}"
                );
            }
        }
    }

    #[test]
    fn degeneracy_maps_intertwine_hecke() {
        let big = ModularSymbolSpace::build(77).unwrap();
        let small = ModularSymbolSpace::build(11).unwrap();
        for d in [1u64, 7] {
            let del = big.degeneracy_matrix(&small, d).unwrap();
            for q in [2u64, 3] {
                let tq_big = big.hecke_matrix(q).unwrap();
                let tq_small = small.hecke_matrix(q).unwrap();
                assert_eq!(
                    tq_big.mul(&del),
                    del.mul(&tq_small),
                    "T_{q} fails to intertwine the d = {d} map"
                );
            }
        }
    }

    #[test]
    fn degeneracy_to_genus_zero_kills_cuspidal() {
        let big = ModularSymbolSpace::build(77).unwrap();
        let small = ModularSymbolSpace::build(7).unwrap();
        let del = big.degeneracy_matrix(&small, 1).unwrap();
        let image = big.cuspidal_basis.mul(&del);
        assert!(image.is_zero());
    }

    #[test]
    fn degeneracy_level_checks() {
        let a = ModularSymbolSpace::build(77).unwrap();
        let b = ModularSymbolSpace::build(5).unwrap();
        assert!(matches!(
            a.degeneracy_matrix(&b, 1),
            Err(Error::LevelMismatch(_))
        ));
        let c = ModularSymbolSpace::build(11).unwrap();
        assert!(matches!(
            a.degeneracy_matrix(&c, 3),
            Err(Error::LevelMismatch(_))
        ));
    }

    #[test]
    fn new_subspace_dimensions() {
        for (m, expect) in [(11u64, 2usize), (14, 2), (77, 10), (215, 30)] {
            let s = ModularSymbolSpace::build(m).unwrap();
            let new = s.new_subspace_basis().unwrap();
            assert_eq!(new.rows, expect, "new subspace at {m}");
            // new vectors are cuspidal
            assert!(new.mul(&s.boundary).is_zero());
        }
    }

    #[test]
    fn integral_lattices_are_saturated() {
        let s = ModularSymbolSpace::build(11).unwrap();
        let l = s.integral_lattice(&s.cuspidal_basis).unwrap();
        assert_eq!(l.rows, 2);
        let (z, den) = l.clear_denominators();
        // saturating again must not change the lattice
        let again = z.saturate_rows().hnf_basis();
        assert_eq!(again, z.hnf_basis());
        let _ = den;
        // mod-ell rank equals the rational dimension for several ell
        let t2 = s.hecke_matrix(2).unwrap();
        let y = ModularSymbolSpace::integral_operator(&l, &t2).unwrap();
        for ell in [2u64, 3, 5, 7] {
            assert_eq!(y.mod_ell(ell).rows, 2);
        }
    }

    #[test]
    fn integral_hecke_reduces_correctly() {
        // T_2 at level 11 is -2 on the cuspidal lattice: (Y + 2I)^2 = 0 mod 5
        let s = ModularSymbolSpace::build(11).unwrap();
        let l = s.integral_lattice(&s.cuspidal_basis).unwrap();
        let t2 = s.hecke_matrix(2).unwrap();
        let y = ModularSymbolSpace::integral_operator(&l, &t2).unwrap();
        let m5 = y.mod_ell(5);
        let shifted = m5.sub_scalar_identity(3); // -2 = 3 mod 5
        assert!(shifted.mul(&shifted).is_zero());
    }

    #[test]
    fn charpolys_of_integral_hecke_are_integer() {
        let s = ModularSymbolSpace::build(77).unwrap();
        let new = s.new_subspace_basis().unwrap();
        let l = s.integral_lattice(&new).unwrap();
        for q in [2u64, 3, 7] {
            let op = s.hecke_matrix(q).unwrap();
            // integral_operator itself errors unless Y is an integer matrix
            let y = ModularSymbolSpace::integral_operator(&l, &op).unwrap();
            assert_eq!(y.charpoly().len(), l.rows + 1);
        }
    }

    #[test]
    fn witness_at_77_mod_3_with_up_minus_one() {
        let e: EllipticCurve = "[0,-1,1,-10,-20]".parse().unwrap();
        let s = ModularSymbolSpace::build(77).unwrap();
        let targets: Vec<(u64, i64)> = [2u64, 5, 13, 17, 19, 23, 29]
            .iter()
            .map(|&q| (q, e.ap(q).unwrap()))
            .collect();
        let w = congruence_witness(&s, 3, &targets, Some((7, -1))).unwrap();
        assert!(w.kernel_dimension >= 1);
        assert!(!w.mod_two_caveat);
        assert_eq!(w.coefficient_bound, 29);
        verify_witness(&s, &w).unwrap();
        // JSON round trip preserves the certificate
        let text = serde_json::to_string(&w).unwrap();
        let back: EigensystemWitness = serde_json::from_str(&text).unwrap();
        assert_eq!(back, w);
        verify_witness(&s, &back).unwrap();
    }

    #[test]
    fn witness_at_77_mod_3_with_up_plus_one_fails() {
        let e: EllipticCurve = "[0,-1,1,-10,-20]".parse().unwrap();
        let s = ModularSymbolSpace::build(77).unwrap();
        let targets: Vec<(u64, i64)> = [2u64, 5, 13, 17, 19, 23, 29]
            .iter()
            .map(|&q| (q, e.ap(q).unwrap()))
            .collect();
        assert!(matches!(
            congruence_witness(&s, 3, &targets, Some((7, 1))),
            Err(Error::NotFound(_))
        ));
    }

    #[test]
    fn witness_at_215_mod_2() {
        let e: EllipticCurve = "[0,1,1,0,0]".parse().unwrap();
        let s = ModularSymbolSpace::build(215).unwrap();
        let targets: Vec<(u64, i64)> = [3u64, 7, 11, 13, 17, 19, 23, 29]
            .iter()
            .map(|&q| (q, e.ap(q).unwrap()))
            .collect();
        let w = congruence_witness(&s, 2, &targets, None).unwrap();
        assert!(w.kernel_dimension >= 1);
        assert!(w.mod_two_caveat);
        assert_eq!(w.new_dimension, 30);
        verify_witness(&s, &w).unwrap();
    }

    #[test]
    fn witness_rejects_bad_targets() {
        let s = ModularSymbolSpace::build(77).unwrap();
        // target dividing the level
        assert!(matches!(
            congruence_witness(&s, 3, &[(7, 1)], None),
            Err(Error::PreconditionFailed(_))
        ));
        // target equal to ell
        assert!(matches!(
            congruence_witness(&s, 3, &[(3, 1)], None),
            Err(Error::PreconditionFailed(_))
        ));
        // tampered witness fails re-verification
        let e: EllipticCurve = "[0,-1,1,-10,-20]".parse().unwrap();
        let targets: Vec<(u64, i64)> = [2u64, 5, 13]
            .iter()
            .map(|&q| (q, e.ap(q).unwrap()))
            .collect();
        if let Ok(mut w) = congruence_witness(&s, 3, &targets, Some((7, -1))) {
            w.targets[0].1 += 1;
            assert!(verify_witness(&s, &w).is_err());
        }
    }

    #[test]
    fn witness_on_zero_new_subspace_is_not_found() {
        // Level 7 has genus 0: no cusp forms, no new subspace, so any search
        // must come back NotFound rather than blowing up on empty matrices.
        let s = ModularSymbolSpace::build(7).unwrap();
        assert_eq!(s.dim_cuspidal, 0);
        assert!(matches!(
            congruence_witness(&s, 3, &[(2, -1)], None),
            Err(Error::NotFound(_))
        ));
    }

    #[test]
    fn twist_flips_signs_by_legendre_symbol() {
        let targets = vec![(2u64, -1i64), (3, 1), (5, 2)];
        let twisted = twist_eigensystem(&targets, 11);
        // (2|11) = -1, (3|11) = 1, (5|11) = 1
        assert_eq!(twisted, vec![(2, 1), (3, 1), (5, 2)]);
        // twisting twice is the identity
        assert_eq!(twist_eigensystem(&twisted, 11), targets);
    }

    #[test]
    fn cusp_equivalence_examples() {
        // at level 11 the classes are 0 and oo
        assert!(cusps_equivalent(11, (1, 11), (1, 0)));
        assert!(cusps_equivalent(11, (0, 1), (1, 1)));
        assert!(!cusps_equivalent(11, (0, 1), (1, 0)));
        // at level 1 all cusps collapse
        assert!(cusps_equivalent(1, (0, 1), (1, 0)));
    }

    #[test]
    fn level_one_space_is_trivial() {
        let s = ModularSymbolSpace::build(1).unwrap();
        assert_eq!(s.dim_full, 0);
        assert_eq!(s.dim_cuspidal, 0);
        assert_eq!(s.cusp_reps.len(), 1);
    }
}
