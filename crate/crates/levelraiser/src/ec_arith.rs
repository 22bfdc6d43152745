//! Elliptic curves over Q: Weierstrass invariants, minimal models, point
//! counts over prime fields, and the 2-division polynomial.
//!
//! A curve is stored by its long Weierstrass coefficients (a1, a2, a3, a4,
//! a6).  Everything downstream (Fourier coefficients a_p, mod-2 Galois data)
//! is an isogeny-class-free isomorphism invariant, so the first step of any
//! computation is passage to the global minimal model: scale out the largest
//! u with u^4 | c4, u^6 | c6, u^12 | disc subject to the integrality
//! constraints on (c4/u^4, c6/u^6) at 2 and 3, then pin down the unique
//! translate with a1, a3 in {0, 1} and a2 in {-1, 0, 1}.
//!
//! Point counts are exact.  For odd p the affine count uses the completed
//! square (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6 and a table of
//! squares mod p; p = 2 is handled by direct enumeration.  a_p = p + 1 - #E
//! at primes of good reduction, and good reduction is decided by the minimal
//! discriminant, never the discriminant of the model handed in.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

use crate::arith::{self, primes_up_to};
use crate::error::{Error, Result};
use crate::polyz;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EllipticCurve {
    pub a1: BigInt,
    pub a2: BigInt,
    pub a3: BigInt,
    pub a4: BigInt,
    pub a6: BigInt,
}

impl fmt::Display for EllipticCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{},{},{},{},{}]",
            self.a1, self.a2, self.a3, self.a4, self.a6
        )
    }
}

impl FromStr for EllipticCurve {
    type Err = Error;

    /// Accepts "a1,a2,a3,a4,a6", with or without surrounding brackets.
    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim().trim_start_matches('[').trim_end_matches(']');
        let parts: Vec<&str> = trimmed.split(',').map(|t| t.trim()).collect();
        if parts.len() != 5 {
            return Err(Error::Parse(format!(
                "expected five a-invariants a1,a2,a3,a4,a6, got {} values",
                parts.len()
            )));
        }
        let mut vals = Vec::with_capacity(5);
        for part in &parts {
            let v = BigInt::from_str(part)
                .map_err(|_| Error::Parse(format!("bad integer '{part}' in curve")))?;
            vals.push(v);
        }
        EllipticCurve::new(
            vals[0].clone(),
            vals[1].clone(),
            vals[2].clone(),
            vals[3].clone(),
            vals[4].clone(),
        )
    }
}

/// Splitting behaviour of the 2-division polynomial over Q.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GaloisKind {
    /// Irreducible cubic, nonsquare discriminant: full symmetric group.
    S3,
    /// Irreducible cubic, square discriminant: cyclic of order 3.
    C3,
    /// One rational root: the other two 2-torsion points are conjugate.
    Partial,
    /// All 2-torsion rational.
    Split,
}

impl GaloisKind {
    pub fn field_degree(self) -> u32 {
        match self {
            GaloisKind::S3 => 6,
            GaloisKind::C3 => 3,
            GaloisKind::Partial => 2,
            GaloisKind::Split => 1,
        }
    }
}

/// Fibre type of the reduction mod p of a minimal model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ReductionType {
    Good,
    Multiplicative,
    Additive,
}

/// The 2-division field of a curve, described by a monic integral cubic.
#[derive(Clone, Debug)]
pub struct TwoDivision {
    /// Monic cubic X^3 + b2 X^2 + 8 b4 X + 16 b6 (constant term first) whose
    /// roots are 4x for x the 2-torsion x-coordinates.
    pub cubic: Vec<BigInt>,
    pub disc: BigInt,
    pub kind: GaloisKind,
}

impl EllipticCurve {
    pub fn new(a1: BigInt, a2: BigInt, a3: BigInt, a4: BigInt, a6: BigInt) -> Result<Self> {
        let e = EllipticCurve { a1, a2, a3, a4, a6 };
        if e.discriminant().is_zero() {
            return Err(Error::SingularCurve);
        }
        Ok(e)
    }

    pub fn short(a4: i64, a6: i64) -> Result<Self> {
        EllipticCurve::new(
            BigInt::zero(),
            BigInt::zero(),
            BigInt::zero(),
            BigInt::from(a4),
            BigInt::from(a6),
        )
    }

    pub fn ainvs(&self) -> [BigInt; 5] {
        [
            self.a1.clone(),
            self.a2.clone(),
            self.a3.clone(),
            self.a4.clone(),
            self.a6.clone(),
        ]
    }

    pub fn b2(&self) -> BigInt {
        &self.a1 * &self.a1 + 4 * &self.a2
    }

    pub fn b4(&self) -> BigInt {
        2 * &self.a4 + &self.a1 * &self.a3
    }

    pub fn b6(&self) -> BigInt {
        &self.a3 * &self.a3 + 4 * &self.a6
    }

    pub fn b8(&self) -> BigInt {
        &self.a1 * &self.a1 * &self.a6 + 4 * &self.a2 * &self.a6 - &self.a1 * &self.a3 * &self.a4
            + &self.a2 * &self.a3 * &self.a3
            - &self.a4 * &self.a4
    }

    pub fn c4(&self) -> BigInt {
        let b2 = self.b2();
        &b2 * &b2 - 24 * self.b4()
    }

    pub fn c6(&self) -> BigInt {
        let b2 = self.b2();
        let b4 = self.b4();
        -(&b2 * &b2 * &b2) + 36 * &b2 * &b4 - 216 * self.b6()
    }

    pub fn discriminant(&self) -> BigInt {
        let b2 = self.b2();
        let b4 = self.b4();
        let b6 = self.b6();
        let b8 = self.b8();
        -(&b2 * &b2 * &b8) - 8 * (&b4 * &b4 * &b4) - 27 * (&b6 * &b6) + 9 * &b2 * &b4 * &b6
    }

    /// Global minimal model together with the scaling factor u, so that the
    /// returned discriminant is disc(self) / u^12.  The translate is pinned
    /// to a1, a3 in {0, 1}, a2 in {-1, 0, 1}.
    pub fn minimal_model(&self) -> (EllipticCurve, BigInt) {
        let c4 = self.c4();
        let c6 = self.c6();
        let disc = self.discriminant();
        let u0 = largest_scaling(&c4, &c6, &disc);
        let mut divisors = divisors_of(&u0);
        divisors.sort();
        divisors.reverse();
        for u in divisors {
            let u4 = u.pow(4);
            let u6 = u.pow(6);
            let c4u = &c4 / &u4;
            let c6u = &c6 / &u6;
            if !kraus_conditions(&c4u, &c6u) {
                continue;
            }
            let e = curve_from_invariants(&c4u, &c6u)
                .expect("integrality conditions guarantee a reduced model");
            debug_assert_eq!(&e.discriminant() * u.pow(12), disc);
            return (e, u);
        }
        unreachable!("u = 1 always satisfies the integrality conditions of the given model");
    }

    pub fn is_minimal(&self) -> bool {
        self.minimal_model().1.is_one()
    }

    /// Product of the bad primes when the curve is semistable (multiplicative
    /// reduction everywhere); None when some bad prime is additive, since the
    /// bad-prime product is the conductor only in the semistable case.
    pub fn conductor_if_semistable(&self) -> Option<BigInt> {
        let (emin, _) = self.minimal_model();
        let disc = emin.discriminant();
        let c4 = emin.c4();
        let mut n = BigInt::one();
        for (p, _) in arith::factor_bigint(&disc.abs()) {
            if (&c4 % &p).is_zero() {
                return None;
            }
            n *= p;
        }
        Some(n)
    }

    /// Reduction type at p, read off the minimal model: good when p does not
    /// divide the minimal discriminant, multiplicative when it does but p
    /// does not divide c4 (a node with distinct tangents), additive otherwise.
    pub fn reduction_type(&self, p: u64) -> ReductionType {
        let (emin, _) = self.minimal_model();
        let pb = BigInt::from(p);
        if !(emin.discriminant() % &pb).is_zero() {
            ReductionType::Good
        } else if !(emin.c4() % &pb).is_zero() {
            ReductionType::Multiplicative
        } else {
            ReductionType::Additive
        }
    }

    /// Trace of Frobenius at a prime of good reduction.
    pub fn ap(&self, p: u64) -> Result<i64> {
        let (emin, _) = self.minimal_model();
        emin.ap_on_minimal(p)
    }

    fn ap_on_minimal(&self, p: u64) -> Result<i64> {
        let disc = self.discriminant();
        if (disc % BigInt::from(p)).is_zero() {
            return Err(Error::BadReduction { p });
        }
        if p == 2 {
            let count = self.count_points_enumerate(2);
            return Ok(3 - count as i64);
        }
        // #affine = sum_x (1 + chi(f(x))) with f = 4x^3 + b2 x^2 + 2 b4 x + b6,
        // so a_p = p + 1 - (#affine + 1) = -sum_x chi(f(x)).
        let chi = chi_table(p);
        let b2 = red(&self.b2(), p);
        let b4 = red(&self.b4(), p);
        let b6 = red(&self.b6(), p);
        let two_b4 = 2 * b4 % p;
        let mut sum: i64 = 0;
        for x in 0..p {
            let x2 = arith::mul_mod(x, x, p);
            let x3 = arith::mul_mod(x2, x, p);
            let fx = (4 * x3 % p + arith::mul_mod(b2, x2, p) + arith::mul_mod(two_b4, x, p) + b6)
                % p;
            sum += chi[fx as usize] as i64;
        }
        Ok(-sum)
    }

    /// Affine-plus-infinity point count by brute enumeration of the long
    /// Weierstrass equation.  Quadratic in p; used at p = 2 and as an
    /// independent check on the square-table count.
    pub fn count_points_enumerate(&self, p: u64) -> u64 {
        let a1 = red(&self.a1, p);
        let a2 = red(&self.a2, p);
        let a3 = red(&self.a3, p);
        let a4 = red(&self.a4, p);
        let a6 = red(&self.a6, p);
        let mut count = 1; // infinity
        for x in 0..p {
            let x2 = arith::mul_mod(x, x, p);
            let x3 = arith::mul_mod(x2, x, p);
            let rhs = (x3 + arith::mul_mod(a2, x2, p) + arith::mul_mod(a4, x, p) + a6) % p;
            let a1x_a3 = (arith::mul_mod(a1, x, p) + a3) % p;
            for y in 0..p {
                let lhs = (arith::mul_mod(y, y, p) + arith::mul_mod(a1x_a3, y, p)) % p;
                if lhs == rhs {
                    count += 1;
                }
            }
        }
        count
    }

    /// a_p for every good prime p <= bound, in increasing order.
    pub fn ap_range(&self, bound: u64) -> Vec<(u64, i64)> {
        let (emin, _) = self.minimal_model();
        let primes = primes_up_to(bound);
        primes
            .par_iter()
            .filter_map(|&p| emin.ap_on_minimal(p).ok().map(|a| (p, a)))
            .collect()
    }

    /// Monic integral model of the 2-division polynomial and its splitting
    /// data.  The cubic X^3 + b2 X^2 + 8 b4 X + 16 b6 is 16 f(X/4) for
    /// f = 4x^3 + b2 x^2 + 2 b4 x + b6, whose roots are the x-coordinates of
    /// the 2-torsion, so it cuts out the same field.
    pub fn two_division(&self) -> TwoDivision {
        let cubic = vec![
            16 * self.b6(),
            8 * self.b4(),
            self.b2(),
            BigInt::one(),
        ];
        let disc = polyz::discriminant(&cubic);
        let kind = cubic_galois_kind(&cubic);
        TwoDivision { cubic, disc, kind }
    }

    /// Order of Frobenius at q acting on the 2-torsion, for a curve whose
    /// 2-division field has group S3.  Requires q odd, unramified (q not
    /// dividing the cubic discriminant).
    pub fn frob_order_in_s3(&self, q: u64) -> Result<u32> {
        let td = self.two_division();
        if td.kind != GaloisKind::S3 {
            return Err(Error::PreconditionFailed(format!(
                "2-division field has group {:?}, not S3",
                td.kind
            )));
        }
        frob_order_from_cubic(&td.cubic, &td.disc, q)
    }
}

/// Frobenius order in S3 read off from the number of roots of the cubic
/// mod q: 3 roots -> identity, 1 root -> transposition, 0 roots -> 3-cycle.
pub fn frob_order_from_cubic(cubic: &[BigInt], disc: &BigInt, q: u64) -> Result<u32> {
    if q == 2 || !arith::is_prime_u64(q) {
        return Err(Error::PreconditionFailed(format!(
            "q = {q} must be an odd prime"
        )));
    }
    if (disc % BigInt::from(q)).is_zero() {
        return Err(Error::PreconditionFailed(format!(
            "q = {q} ramifies in the 2-division field"
        )));
    }
    match polyz::roots_mod(cubic, q) {
        3 => Ok(1),
        1 => Ok(2),
        0 => Ok(3),
        n => Err(Error::Internal(format!(
            "cubic with {n} roots mod unramified {q}"
        ))),
    }
}

/// Galois kind of a monic integral cubic (assumed separable).
pub fn cubic_galois_kind(cubic: &[BigInt]) -> GaloisKind {
    assert_eq!(polyz::degree(cubic), 3, "expected a cubic");
    assert!(cubic[3].is_one(), "expected a monic cubic");
    let roots = integer_roots_monic(cubic);
    match roots.len() {
        3 => GaloisKind::Split,
        1 => GaloisKind::Partial,
        0 => {
            if arith::is_perfect_square_big(&polyz::discriminant(cubic)) {
                GaloisKind::C3
            } else {
                GaloisKind::S3
            }
        }
        _ => unreachable!("separable cubic cannot have exactly two rational roots"),
    }
}

/// All integer roots of a monic integral polynomial (rational roots of a
/// monic integral polynomial are integers dividing the constant term).
fn integer_roots_monic(p: &[BigInt]) -> Vec<BigInt> {
    let mut roots = Vec::new();
    let c0 = &p[0];
    if c0.is_zero() {
        roots.push(BigInt::zero());
        // divide out x and recurse on the quotient's constant term region:
        // for our cubics it is simpler to just test divisors of the next
        // nonzero coefficient's... instead, factor out all powers of x first.
        let mut q: Vec<BigInt> = p.to_vec();
        while q[0].is_zero() && q.len() > 1 {
            q.remove(0);
        }
        for d in divisors_of(&q[0].abs()) {
            for cand in [d.clone(), -d] {
                if !cand.is_zero()
                    && polyz::eval(p, &cand).is_zero()
                    && !roots.contains(&cand)
                {
                    roots.push(cand);
                }
            }
        }
        return roots;
    }
    for d in divisors_of(&c0.abs()) {
        for cand in [d.clone(), -d] {
            if polyz::eval(p, &cand).is_zero() && !roots.contains(&cand) {
                roots.push(cand);
            }
        }
    }
    roots
}

fn divisors_of(n: &BigInt) -> Vec<BigInt> {
    assert!(n.is_positive(), "divisors of a positive integer");
    let mut divs = vec![BigInt::one()];
    for (p, e) in arith::factor_bigint(n) {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    divs
}

fn vp(n: &BigInt, p: &BigInt) -> u32 {
    assert!(!n.is_zero());
    let mut m = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        m = q;
        v += 1;
    }
}

/// Largest u with u^4 | c4, u^6 | c6, u^12 | disc (zero invariants impose no
/// constraint; disc is never zero).
fn largest_scaling(c4: &BigInt, c6: &BigInt, disc: &BigInt) -> BigInt {
    // candidate primes all divide disc (if p^4 | c4 and p^6 | c6 then p^12
    // divides c4^3 - c6^2 = 1728 disc, so p | disc or p | 12; include 2, 3)
    let mut primes: Vec<BigInt> = arith::factor_bigint(&disc.abs())
        .into_iter()
        .map(|(p, _)| p)
        .collect();
    for small in [2u32, 3] {
        let sp = BigInt::from(small);
        if !primes.contains(&sp) {
            primes.push(sp);
        }
    }
    let mut u = BigInt::one();
    for p in primes {
        let e4 = if c4.is_zero() {
            u32::MAX
        } else {
            vp(c4, &p) / 4
        };
        let e6 = if c6.is_zero() {
            u32::MAX
        } else {
            vp(c6, &p) / 6
        };
        let e12 = vp(disc, &p) / 12;
        let e = e4.min(e6).min(e12);
        if e > 0 {
            u *= p.pow(e);
        }
    }
    u
}

/// Integrality conditions at 2 and 3 for (c4, c6) to be the invariants of an
/// integral Weierstrass equation: ord_3(c6) != 2, and either c6 = -1 mod 4
/// or (c4 = 0 mod 16 and c6 = 0 or 8 mod 32).
fn kraus_conditions(c4: &BigInt, c6: &BigInt) -> bool {
    if !c6.is_zero() && vp(c6, &BigInt::from(3)) == 2 {
        return false;
    }
    let c6m4 = c6.mod_floor(&BigInt::from(4));
    if c6m4 == BigInt::from(3) {
        return true;
    }
    let c4m16 = c4.mod_floor(&BigInt::from(16));
    let c6m32 = c6.mod_floor(&BigInt::from(32));
    c4m16.is_zero() && (c6m32.is_zero() || c6m32 == BigInt::from(8))
}

/// Reduced integral model with the given invariants: a1, a3 in {0, 1} and
/// a2 in {-1, 0, 1}.  Returns None when no candidate yields integer
/// coefficients (i.e. when the integrality conditions fail).
fn curve_from_invariants(c4: &BigInt, c6: &BigInt) -> Option<EllipticCurve> {
    for a1 in 0i64..=1 {
        for a2 in -1i64..=1 {
            for a3 in 0i64..=1 {
                let a1b = BigInt::from(a1);
                let a2b = BigInt::from(a2);
                let a3b = BigInt::from(a3);
                let b2 = &a1b * &a1b + 4 * &a2b;
                let b4_num: BigInt = &b2 * &b2 - c4;
                let (b4, r) = b4_num.div_rem(&BigInt::from(24));
                if !r.is_zero() {
                    continue;
                }
                let b2_cubed: BigInt = &b2 * &b2 * &b2;
                let b6_num: BigInt = 36 * &b2 * &b4 - b2_cubed - c6;
                let (b6, r) = b6_num.div_rem(&BigInt::from(216));
                if !r.is_zero() {
                    continue;
                }
                let a4_num: BigInt = &b4 - &a1b * &a3b;
                let (a4, r) = a4_num.div_rem(&BigInt::from(2));
                if !r.is_zero() {
                    continue;
                }
                let a6_num: BigInt = &b6 - &a3b * &a3b;
                let (a6, r) = a6_num.div_rem(&BigInt::from(4));
                if !r.is_zero() {
                    continue;
                }
                let e = EllipticCurve {
                    a1: a1b,
                    a2: a2b,
                    a3: a3b,
                    a4,
                    a6,
                };
                if &e.c4() == c4 && &e.c6() == c6 && !e.discriminant().is_zero() {
                    return Some(e);
                }
            }
        }
    }
    None
}

fn red(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

/// chi[v] = Legendre symbol (v | p) for 0 <= v < p.
fn chi_table(p: u64) -> Vec<i8> {
    let mut t = vec![-1i8; p as usize];
    t[0] = 0;
    for y in 1..p {
        t[arith::mul_mod(y, y, p) as usize] = 1;
    }
    t
}
