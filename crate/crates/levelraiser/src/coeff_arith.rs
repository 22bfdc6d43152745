//! Arithmetic of p-th Fourier coefficients as totally real algebraic
//! integers.
//!
//! A coefficient a_p of a weight-2 newform is handled entirely through its
//! characteristic polynomial P over Q (a power of the minimal polynomial):
//! norms of the shifts p + 1 -/+ a_p are plain polynomial evaluations,
//!
//!   N(t - a_p) = P(t),      N(t + a_p) = (-1)^n P(-t),
//!
//! so no number field is ever constructed.  A prime ideal of residue
//! characteristic ell witnessing a_p = eps (p+1) exists exactly when ell
//! divides N(p+1 - eps a_p), which reduces congruence discovery to integer
//! factorization of two norms.
//!
//! Everything here is decided in exact arithmetic.  Real-rootedness and the
//! root bound |sigma(a_p)| <= 2 sqrt(p) use Sturm sequences over BigRational
//! with the irrational endpoint 2 sqrt(p) replaced by a rational bracket of
//! width < 10^-6 (the bound is treated as inclusive, which matters only for
//! p = 2 and x^2 - 8, whose roots sit exactly at the bound).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::polyz;

/// The p-th coefficient of a newform, given by its characteristic polynomial
/// (monic, integer coefficients, constant term first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraicCoefficient {
    pub p: u64,
    pub charpoly: Vec<BigInt>,
    pub n: usize,
}

/// A congruence a_p = eps (p+1) mod ell, recorded by residue characteristic
/// and sign; primes of Z-bar are never materialized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CongruenceCharacteristic {
    pub ell: u64,
    pub epsilon: i8,
    pub avoids_p: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violation: Option<String>,
}

/// Best possible avoiding-p constant in degree 1: every prime p > 2 admits a
/// characteristic with ell != p (only p = 2, a = +/-1 fails, where the norm
/// product is 8, a pure power of 2).
pub const REFINED_C1: u32 = 2;

impl AlgebraicCoefficient {
    pub fn new(p: u64, charpoly: Vec<BigInt>) -> Result<Self> {
        if !arith::is_prime_u64(p) {
            return Err(Error::PreconditionFailed(format!("p = {p} is not prime")));
        }
        let cp = polyz::trim(&charpoly);
        let n = cp.len().saturating_sub(1);
        if n < 1 {
            return Err(Error::Parse("characteristic polynomial must be nonconstant".into()));
        }
        if !cp.last().unwrap().is_one() {
            return Err(Error::Parse("characteristic polynomial must be monic".into()));
        }
        Ok(AlgebraicCoefficient { p, charpoly: cp, n })
    }

    /// Degree-1 coefficient: a_p = a, charpoly x - a.
    pub fn rational(p: u64, a: i64) -> Result<Self> {
        AlgebraicCoefficient::new(p, vec![BigInt::from(-a), BigInt::one()])
    }

    /// N(t - a_p) for sign -1 and N(t + a_p) for sign +1, as exact integers.
    pub fn norm_shift(&self, t: &BigInt, sign: i8) -> BigInt {
        assert!(sign == 1 || sign == -1, "sign must be +1 or -1");
        if sign == -1 {
            polyz::eval(&self.charpoly, t)
        } else {
            let v = polyz::eval(&self.charpoly, &-t);
            if self.n % 2 == 1 {
                -v
            } else {
                v
            }
        }
    }

    fn shifted_norms(&self) -> (BigInt, BigInt) {
        let t = BigInt::from(self.p + 1);
        // eps = +1 pairs with the shift t - a_p, eps = -1 with t + a_p
        (self.norm_shift(&t, -1), self.norm_shift(&t, 1))
    }

    /// True exactly when (p+1+a_p)(p+1-a_p) has unit norm, i.e. no
    /// level-raising congruence exists at p.  For coefficients satisfying the
    /// root bound this happens only for p = 2 with a_2^2 = 8.
    pub fn is_unit_obstructed(&self) -> bool {
        let (nplus, nminus) = self.shifted_norms();
        (nplus * nminus).abs().is_one()
    }

    /// All congruence characteristics (ell, eps), the +1 block first, each
    /// block sorted by ell.  Empty exactly when the coefficient is
    /// unit-obstructed.
    pub fn congruence_characteristics(&self) -> Vec<CongruenceCharacteristic> {
        let mut out = Vec::new();
        let t = BigInt::from(self.p + 1);
        for eps in [1i8, -1] {
            let norm = self.norm_shift(&t, -eps);
            assert!(
                !norm.is_zero(),
                "p+1 {} a_p has zero norm; the coefficient violates the root bound",
                if eps == 1 { "-" } else { "+" }
            );
            let mut ells: Vec<u64> = arith::factor_bigint(&norm.abs())
                .into_iter()
                .map(|(q, _)| {
                    num_traits::ToPrimitive::to_u64(&q)
                        .expect("prime factor of a norm exceeds 64 bits")
                })
                .collect();
            ells.sort_unstable();
            for ell in ells {
                out.push(CongruenceCharacteristic {
                    ell,
                    epsilon: eps,
                    avoids_p: ell != self.p,
                });
            }
        }
        out
    }

    /// Primes ell != p dividing N(p+1-a_p) N(p+1+a_p), ascending.  Nonempty
    /// whenever n is odd and p exceeds cn_bound(n); for n = 1, nonempty for
    /// every p > 2 (at p = 2 the coefficients a = +/-1 give the pure power
    /// 2^3 = 8 and the list is empty).
    pub fn avoiding_p_characteristics(&self) -> Vec<u64> {
        let (nplus, nminus) = self.shifted_norms();
        let prod = nplus * nminus;
        assert!(
            !prod.is_zero(),
            "p+1 +/- a_p has zero norm; the coefficient violates the root bound"
        );
        let mut ells: Vec<u64> = arith::factor_bigint(&prod.abs())
            .into_iter()
            .map(|(q, _)| {
                num_traits::ToPrimitive::to_u64(&q)
                    .expect("prime factor of a norm exceeds 64 bits")
            })
            .filter(|&ell| ell != self.p)
            .collect();
        ells.sort_unstable();
        ells.dedup();
        ells
    }

    /// Check the two defining invariants: all roots real, all roots within
    /// the (inclusive) bound |x| <= 2 sqrt(p).  Reports the first violation.
    pub fn validate(&self) -> ValidationReport {
        let sf = squarefree_part(&self.charpoly);
        let deg = sf.len() - 1;
        let chain = sturm_chain(&sf);
        let real_roots = variations_at_minus_inf(&chain) - variations_at_plus_inf(&chain);
        if real_roots < deg {
            return ValidationReport {
                ok: false,
                violation: Some(format!(
                    "not totally real: {real_roots} of {deg} distinct roots are real"
                )),
            };
        }
        let (_, u) = bracket_two_sqrt(self.p);
        let in_bound = count_roots_in(&chain, &-u.clone(), &u);
        if in_bound < deg {
            return ValidationReport {
                ok: false,
                violation: Some(format!(
                    "root bound violated: only {in_bound} of {deg} roots lie within |x| <= 2*sqrt({})",
                    self.p
                )),
            };
        }
        ValidationReport {
            ok: true,
            violation: None,
        }
    }
}

/// Safe rational over-approximation B of theta^(2n), where theta is the
/// greatest real root of X^n - X^(n-1) - 1 (n odd): theta^(2n) <= B <
/// theta^(2n) + 1.  For every prime p > B, every totally real degree-n
/// coefficient admits a characteristic avoiding p.
pub fn cn_bound(n: u32) -> Result<BigRational> {
    if n < 1 || n % 2 == 0 {
        return Err(Error::InvalidDegree { n });
    }
    if n == 1 {
        // X - 2: theta = 2 exactly
        return Ok(BigRational::from_integer(BigInt::from(4)));
    }
    let q = |x: &BigRational| -> BigRational {
        qpow(x, n) - qpow(x, n - 1) - BigRational::one()
    };
    let mut lo = BigRational::one();
    let mut hi = BigRational::from_integer(BigInt::from(2));
    debug_assert!(q(&lo).is_negative() && q(&hi).is_positive());
    let width_goal = BigRational::new(BigInt::one(), BigInt::from(2).pow(n));
    let power_goal = BigRational::new(BigInt::one(), BigInt::from(16));
    loop {
        if &hi - &lo < width_goal {
            let bhi = qpow(&hi, 2 * n);
            let blo = qpow(&lo, 2 * n);
            if &bhi - &blo < power_goal {
                return Ok(bhi);
            }
        }
        let mid = (&lo + &hi) / BigRational::from_integer(BigInt::from(2));
        if q(&mid).is_negative() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

fn qpow(x: &BigRational, e: u32) -> BigRational {
    BigRational::new(x.numer().pow(e), x.denom().pow(e))
}

// ---------------------------------------------------------------------------
// Sturm sequences over Q
// ---------------------------------------------------------------------------

type QPoly = Vec<BigRational>;

fn to_q(p: &[BigInt]) -> QPoly {
    p.iter().map(|c| BigRational::from(c.clone())).collect()
}

fn q_trim(p: &mut QPoly) {
    while p.len() > 1 && p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
}

fn q_is_zero(p: &QPoly) -> bool {
    p.iter().all(|c| c.is_zero())
}

fn q_derivative(p: &QPoly) -> QPoly {
    if p.len() <= 1 {
        return vec![BigRational::zero()];
    }
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * BigRational::from(BigInt::from(k as u64)))
        .collect()
}

/// Remainder of a by b (b nonzero).
fn q_rem(a: &QPoly, b: &QPoly) -> QPoly {
    let mut r = a.clone();
    q_trim(&mut r);
    let mut bb = b.clone();
    q_trim(&mut bb);
    assert!(!q_is_zero(&bb));
    while !q_is_zero(&r) && r.len() >= bb.len() {
        let shift = r.len() - bb.len();
        let f = r.last().unwrap() / bb.last().unwrap();
        for (i, c) in bb.iter().enumerate() {
            let v = &r[shift + i] - &f * c;
            r[shift + i] = v;
        }
        r.pop(); // leading term cancels exactly
        q_trim(&mut r);
    }
    r
}

fn q_divide_exact(a: &QPoly, b: &QPoly) -> QPoly {
    let mut r = a.clone();
    q_trim(&mut r);
    let mut bb = b.clone();
    q_trim(&mut bb);
    let mut quot = vec![BigRational::zero(); r.len().saturating_sub(bb.len()) + 1];
    while !q_is_zero(&r) && r.len() >= bb.len() {
        let shift = r.len() - bb.len();
        let f = r.last().unwrap() / bb.last().unwrap();
        quot[shift] = f.clone();
        for (i, c) in bb.iter().enumerate() {
            let v = &r[shift + i] - &f * c;
            r[shift + i] = v;
        }
        r.pop();
        q_trim(&mut r);
    }
    assert!(q_is_zero(&r), "division not exact");
    quot
}

fn q_gcd(a: &QPoly, b: &QPoly) -> QPoly {
    let mut x = a.clone();
    let mut y = b.clone();
    q_trim(&mut x);
    q_trim(&mut y);
    while !q_is_zero(&y) {
        let r = q_rem(&x, &y);
        x = y;
        y = r;
    }
    // normalize monic
    let lead = x.last().unwrap().clone();
    if !lead.is_zero() && !lead.is_one() {
        for c in &mut x {
            *c = &*c / &lead;
        }
    }
    x
}

/// p / gcd(p, p'): same roots, all simple.
fn squarefree_part(p: &[BigInt]) -> QPoly {
    let pq = to_q(p);
    let g = q_gcd(&pq, &q_derivative(&pq));
    if g.len() == 1 {
        return pq;
    }
    q_divide_exact(&pq, &g)
}

fn sturm_chain(p: &QPoly) -> Vec<QPoly> {
    let mut chain = vec![p.clone(), q_derivative(p)];
    q_trim(&mut chain[1]);
    loop {
        let k = chain.len();
        if q_is_zero(&chain[k - 1]) {
            chain.pop();
            break;
        }
        let mut r = q_rem(&chain[k - 2], &chain[k - 1]);
        if q_is_zero(&r) {
            break;
        }
        for c in &mut r {
            *c = -c.clone();
        }
        chain.push(r);
    }
    chain
}

fn q_eval(p: &QPoly, x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn sign_of(x: &BigRational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

fn count_variations(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn variations_at(chain: &[QPoly], x: &BigRational) -> usize {
    count_variations(chain.iter().map(|p| sign_of(&q_eval(p, x))))
}

fn variations_at_plus_inf(chain: &[QPoly]) -> usize {
    count_variations(chain.iter().map(|p| sign_of(p.last().unwrap())))
}

fn variations_at_minus_inf(chain: &[QPoly]) -> usize {
    count_variations(chain.iter().map(|p| {
        let s = sign_of(p.last().unwrap());
        if (p.len() - 1) % 2 == 1 {
            -s
        } else {
            s
        }
    }))
}

/// Number of distinct roots in (a, b] for the squarefree polynomial behind
/// `chain`.
fn count_roots_in(chain: &[QPoly], a: &BigRational, b: &BigRational) -> usize {
    variations_at(chain, a) - variations_at(chain, b)
}

/// Rational bracket l < 2 sqrt(p) < u with u - l < 10^-6, found by bisecting
/// t^2 against 4p.  Endpoints always have denominator > 1, so they are never
/// roots of a monic integer polynomial.
fn bracket_two_sqrt(p: u64) -> (BigRational, BigRational) {
    let target = BigInt::from(4 * p as i64);
    let root = arith::isqrt_big(&target);
    debug_assert!(
        (&root * &root) != target,
        "4p cannot be a perfect square for prime p"
    );
    let mut lo = BigRational::from_integer(root.clone());
    let mut hi = BigRational::from_integer(root + 1);
    let goal = BigRational::new(BigInt::one(), BigInt::from(2_000_000));
    while &hi - &lo >= goal || hi.denom().is_one() {
        let mid = (&lo + &hi) / BigRational::from_integer(BigInt::from(2));
        let midsq = &mid * &mid;
        if midsq < BigRational::from_integer(target.clone()) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}
