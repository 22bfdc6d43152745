//! Polynomials with BigInt coefficients, stored constant term first.
//!
//! Coefficient vectors follow the convention `p[k]` = coefficient of x^k,
//! matching how characteristic polynomials come out of the linear algebra
//! layer and how polynomials are given on the command line.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::linalg::ZMat;

/// Drop trailing zero coefficients (keeps at least the constant term).
pub fn trim(p: &[BigInt]) -> Vec<BigInt> {
    let mut v = p.to_vec();
    while v.len() > 1 && v.last().map_or(false, |c| c.is_zero()) {
        v.pop();
    }
    v
}

pub fn degree(p: &[BigInt]) -> usize {
    trim(p).len().saturating_sub(1)
}

pub fn is_zero_poly(p: &[BigInt]) -> bool {
    p.iter().all(|c| c.is_zero())
}

pub fn eval(p: &[BigInt], x: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

pub fn eval_rational(p: &[BigInt], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * x + BigRational::from(c.clone());
    }
    acc
}

pub fn derivative(p: &[BigInt]) -> Vec<BigInt> {
    if p.len() <= 1 {
        return vec![BigInt::zero()];
    }
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * BigInt::from(k as u64))
        .collect()
}

/// Substitute -x for x: p(x) -> p(-x).
pub fn reflect(p: &[BigInt]) -> Vec<BigInt> {
    p.iter()
        .enumerate()
        .map(|(k, c)| if k % 2 == 1 { -c.clone() } else { c.clone() })
        .collect()
}

pub fn negate(p: &[BigInt]) -> Vec<BigInt> {
    p.iter().map(|c| -c.clone()).collect()
}

/// Resultant of p and q via the Sylvester matrix and a fraction-free
/// determinant.  Res(p, q) = 0 exactly when p and q share a root.
pub fn resultant(p: &[BigInt], q: &[BigInt]) -> BigInt {
    let p = trim(p);
    let q = trim(q);
    let m = p.len() - 1;
    let n = q.len() - 1;
    if m == 0 {
        // Res(c, q) = c^deg(q)
        return p[0].pow(n as u32);
    }
    if n == 0 {
        return q[0].pow(m as u32);
    }
    let size = m + n;
    let mut s = ZMat::zeros(size, size);
    // n rows of p's coefficients (highest degree first), shifted
    for i in 0..n {
        for (k, c) in p.iter().rev().enumerate() {
            s.set(i, i + k, c.clone());
        }
    }
    // m rows of q's coefficients
    for i in 0..m {
        for (k, c) in q.iter().rev().enumerate() {
            s.set(n + i, i + k, c.clone());
        }
    }
    s.det_bareiss()
}

/// Discriminant of p: (-1)^{m(m-1)/2} Res(p, p') / lc(p).
pub fn discriminant(p: &[BigInt]) -> BigInt {
    let p = trim(p);
    let m = p.len() - 1;
    assert!(m >= 1, "discriminant needs degree >= 1");
    let r = resultant(&p, &derivative(&p));
    let lc = p.last().unwrap();
    let (d, rem) = num_integer::div_rem(r, lc.clone());
    assert!(rem.is_zero(), "discriminant division must be exact");
    if (m * (m - 1) / 2) % 2 == 1 {
        -d
    } else {
        d
    }
}

/// Number of distinct roots of p mod q (q an odd prime not dividing lc(p)),
/// counted by brute force.  Intended for small moduli or cubics.
pub fn roots_mod(p: &[BigInt], q: u64) -> u64 {
    let qb = BigInt::from(q);
    let coeffs: Vec<u64> = p
        .iter()
        .map(|c| {
            let r = num_integer::Integer::mod_floor(c, &qb);
            num_traits::ToPrimitive::to_u64(&r).unwrap()
        })
        .collect();
    let mut count = 0;
    for x in 0..q {
        let mut acc: u64 = 0;
        for c in coeffs.iter().rev() {
            acc = (crate::arith::mul_mod(acc, x, q) + c) % q;
        }
        if acc == 0 {
            count += 1;
        }
    }
    count
}

/// Reduce p mod ell and test irreducibility for degree <= 3 polynomials:
/// degree 1 is irreducible; degrees 2 and 3 are irreducible exactly when
/// they have no root in F_ell (after checking the degree does not drop).
/// Returns None if the leading coefficient vanishes mod ell.
pub fn irreducible_mod_small_degree(p: &[BigInt], ell: u64) -> Option<bool> {
    let p = trim(p);
    let deg = p.len() - 1;
    assert!(
        (1..=3).contains(&deg),
        "root test only settles irreducibility up to degree 3"
    );
    let ellb = BigInt::from(ell);
    if num_integer::Integer::mod_floor(p.last().unwrap(), &ellb).is_zero() {
        return None;
    }
    Some(roots_mod(&p, ell) == 0)
}

/// Format constant-first coefficients as a readable polynomial in x.
pub fn to_string_pretty(p: &[BigInt]) -> String {
    let p = trim(p);
    if is_zero_poly(&p) {
        return "0".to_string();
    }
    let mut parts: Vec<String> = Vec::new();
    for (k, c) in p.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        let term = match k {
            0 => format!("{mag}"),
            1 if mag.is_one() => "x".to_string(),
            1 => format!("{mag}*x"),
            _ if mag.is_one() => format!("x^{k}"),
            _ => format!("{mag}*x^{k}"),
        };
        if parts.is_empty() {
            parts.push(if c.is_negative() {
                format!("-{term}")
            } else {
                term
            });
        } else {
            parts.push(if c.is_negative() {
                format!(" - {term}")
            } else {
                format!(" + {term}")
            });
        }
    }
    parts.concat()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(coeffs: &[i64]) -> Vec<BigInt> {
        coeffs.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn eval_and_derivative() {
        // p = 1 + 2x + 3x^2
        let p = poly(&[1, 2, 3]);
        assert_eq!(eval(&p, &BigInt::from(2)), BigInt::from(17));
        assert_eq!(derivative(&p), poly(&[2, 6]));
    }

    #[test]
    fn resultant_shared_root() {
        // (x-1)(x-2) and (x-2)(x-3) share x=2
        let p = poly(&[2, -3, 1]);
        let q = poly(&[6, -5, 1]);
        assert!(resultant(&p, &q).is_zero());
        // (x-1)(x-2) and (x-3)(x-4): Res = prod of differences = 2*3*1*2 = 12... compute directly
        let r = poly(&[12, -7, 1]);
        let res = resultant(&p, &r);
        // roots {1,2} vs {3,4}: prod (a-b) over pairs = (1-3)(1-4)(2-3)(2-4) = (-2)(-3)(-1)(-2) = 12
        assert_eq!(res, BigInt::from(12));
    }

    #[test]
    fn discriminant_of_quadratic_and_cubic() {
        // x^2 + bx + c has disc b^2 - 4c
        let p = poly(&[1427, -4, 1]);
        assert_eq!(discriminant(&p), BigInt::from(16 - 4 * 1427));
        // depressed cubic x^3 + px + q has disc -4p^3 - 27q^2
        let c = poly(&[-22, 33, 0, 1]);
        assert_eq!(
            discriminant(&c),
            BigInt::from(-4i64 * 33 * 33 * 33 - 27 * 22 * 22)
        );
        // that value is -156816 = -(396^2)
        assert_eq!(discriminant(&c), BigInt::from(-156816));
    }

    #[test]
    fn root_counting_matches_factorization() {
        // x^2 - 1 mod 7 has roots 1 and 6
        assert_eq!(roots_mod(&poly(&[-1, 0, 1]), 7), 2);
        // x^2 + 1 mod 7: -1 is a nonresidue mod 7
        assert_eq!(roots_mod(&poly(&[1, 0, 1]), 7), 0);
        // x^3 - x mod 5 has roots 0, 1, 4
        assert_eq!(roots_mod(&poly(&[0, -1, 0, 1]), 5), 3);
        // x^3 + 33x - 22 mod 1427 has exactly one root
        let c = poly(&[-22, 33, 0, 1]);
        assert_eq!(roots_mod(&c, 1427), 1);
    }

    #[test]
    fn irreducibility_small_degree() {
        // x^2 + x + 1 mod 2 has no root: irreducible
        assert_eq!(irreducible_mod_small_degree(&poly(&[1, 1, 1]), 2), Some(true));
        // x^2 + 1 mod 2 = (x+1)^2: root at 1
        assert_eq!(irreducible_mod_small_degree(&poly(&[1, 0, 1]), 2), Some(false));
        // leading coefficient drops mod 3
        assert_eq!(irreducible_mod_small_degree(&poly(&[1, 1, 3]), 3), None);
        // x^2 - 4x + 1427 mod 2 = x^2 + 1 = (x+1)^2: reducible
        assert_eq!(
            irreducible_mod_small_degree(&poly(&[1427, -4, 1]), 2),
            Some(false)
        );
        // and mod 3: x^2 + 2x + 2, disc = 4 - 8 = -4 = 2 mod 3, nonresidue: irreducible
        assert_eq!(
            irreducible_mod_small_degree(&poly(&[1427, -4, 1]), 3),
            Some(true)
        );
    }

    #[test]
    fn pretty_printing() {
        assert_eq!(to_string_pretty(&poly(&[1427, -4, 1])), "x^2 - 4*x + 1427");
        assert_eq!(to_string_pretty(&poly(&[0, 1])), "x");
        assert_eq!(to_string_pretty(&poly(&[-3])), "-3");
        assert_eq!(to_string_pretty(&poly(&[2, 0, 0, 5])), "5*x^3 + 2");
    }
}
