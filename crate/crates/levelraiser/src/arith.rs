//! Shared integer arithmetic: sieves, primality, factorization, symbols.
//!
//! Factorization policy is deliberately simple (trial division below 10^5,
//! then Brent-cycle Pollard rho with Miller-Rabin on the cofactors).  Every
//! integer this crate factors is desk-sized: norms Nm(p + 1 -+ a_p) for
//! p <= 500, discriminants of small curves, family members with |k| <= 10^6.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Primes up to and including `n`, by Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return vec![];
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut p = 2usize;
    while p * p <= n {
        if sieve[p] {
            let mut q = p * p;
            while q <= n {
                sieve[q] = false;
                q += p;
            }
        }
        p += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(i, &b)| if b { Some(i as u64) } else { None })
        .collect()
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for u64 (the 12-prime base set covers 2^64).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho_u64(n: u64) -> u64 {
    // Brent's variant; n must be odd composite, not a prime power guard needed.
    debug_assert!(n > 3 && n % 2 == 1);
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        let mut count = 0u64;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd_u64(x.abs_diff(y), n);
            count += 1;
            if count > 1 << 22 {
                break;
            }
        }
        if d != n && d != 1 {
            return d;
        }
        c += 1;
    }
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Factor a u64 into (prime, exponent) pairs, primes ascending.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    if n < 2 {
        return out;
    }
    for p in [2u64, 3, 5] {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
    }
    // wheel over 6k +- 1
    let mut p = 7u64;
    while p.saturating_mul(p) <= n && p < 100_000 {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p % 6 == 1 { 4 } else { 2 };
    }
    if n > 1 {
        if is_prime_u64(n) {
            out.push((n, 1));
        } else {
            // composite cofactor with no factor < 10^5: split recursively
            let mut stack = vec![n];
            let mut found: Vec<u64> = Vec::new();
            while let Some(m) = stack.pop() {
                if is_prime_u64(m) {
                    found.push(m);
                } else {
                    let d = pollard_rho_u64(m);
                    stack.push(d);
                    stack.push(m / d);
                }
            }
            found.sort_unstable();
            let mut i = 0;
            while i < found.len() {
                let p = found[i];
                let mut e = 0;
                while i < found.len() && found[i] == p {
                    e += 1;
                    i += 1;
                }
                out.push((p, e));
            }
        }
    }
    out.sort_unstable_by_key(|&(p, _)| p);
    out
}

/// Factor |n| for a BigInt, returning (prime, exponent) pairs, primes ascending.
///
/// Values small enough for u64 take the fast path; larger ones get trial
/// division then BigUint Pollard rho.
pub fn factor_bigint(n: &BigInt) -> Vec<(BigInt, u32)> {
    let a = n.abs();
    if a.is_zero() || a.is_one() {
        return vec![];
    }
    if let Some(small) = a.to_u64() {
        return factor_u64(small)
            .into_iter()
            .map(|(p, e)| (BigInt::from(p), e))
            .collect();
    }
    let mut m: BigUint = a.to_biguint().unwrap();
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    for p in primes_up_to(100_000) {
        let bp = BigUint::from(p);
        if (&m % &bp).is_zero() {
            let mut e = 0;
            while (&m % &bp).is_zero() {
                m /= &bp;
                e += 1;
            }
            out.push((BigInt::from(p), e));
        }
        if m.is_one() {
            break;
        }
    }
    if !m.is_one() {
        let mut stack = vec![m];
        let mut found: Vec<BigUint> = Vec::new();
        while let Some(c) = stack.pop() {
            if let Some(small) = c.to_u64() {
                for (p, e) in factor_u64(small) {
                    for _ in 0..e {
                        found.push(BigUint::from(p));
                    }
                }
                continue;
            }
            if is_probable_prime(&c) {
                found.push(c);
            } else {
                let d = pollard_rho_big(&c);
                stack.push(&c / &d);
                stack.push(d);
            }
        }
        found.sort();
        let mut i = 0;
        while i < found.len() {
            let p = found[i].clone();
            let mut e = 0;
            while i < found.len() && found[i] == p {
                e += 1;
                i += 1;
            }
            out.push((BigInt::from(p), e));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Miller-Rabin with fixed small-prime bases; deterministic far beyond the
/// sizes this crate ever factors.
fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let bp = BigUint::from(p);
        if *n == bp {
            return true;
        }
        if (n % &bp).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let mut d = n_minus_1.clone();
    let mut s = 0u32;
    while (&d % 2u32).is_zero() {
        d >>= 1;
        s += 1;
    }
    'witness: for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let mut x = BigUint::from(p).modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho_big(n: &BigUint) -> BigUint {
    let one = BigUint::one();
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut x = BigUint::from(2u32);
        let mut y = BigUint::from(2u32);
        loop {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            if diff.is_zero() {
                break;
            }
            let d = diff.gcd(n);
            if d > one && &d < n {
                return d;
            }
        }
        c += 1u32;
    }
}

/// Legendre symbol (a | p) for an odd prime p, via Euler's criterion.
pub fn legendre_u64(a: i64, p: u64) -> i64 {
    debug_assert!(p > 2 && is_prime_u64(p));
    let r = a.rem_euclid(p as i64) as u64;
    if r == 0 {
        return 0;
    }
    let e = pow_mod(r, (p - 1) / 2, p);
    if e == 1 {
        1
    } else {
        -1
    }
}

/// Legendre symbol (a | p) with BigInt a.
pub fn legendre_big(a: &BigInt, p: u64) -> i64 {
    let m = BigInt::from(p);
    let r = a.mod_floor(&m).to_u64().unwrap();
    if r == 0 {
        return 0;
    }
    if pow_mod(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// chi_{-4}(p): the factor 1 + chi appearing in the nu_2 count for X_0.
pub fn chi_minus4(p: u64) -> i64 {
    if p == 2 {
        0
    } else {
        legendre_u64(-1, p)
    }
}

/// chi_{-3}(p): likewise for nu_3.
pub fn chi_minus3(p: u64) -> i64 {
    if p == 3 {
        0
    } else {
        legendre_u64(-3, p)
    }
}

/// Inverse of a mod m (m >= 1), if gcd(a, m) = 1.
pub fn inv_mod_u64(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let e = i128::extended_gcd(&(a as i128), &(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

/// Floor square root of a non-negative BigInt.
pub fn isqrt_big(n: &BigInt) -> BigInt {
    debug_assert!(!n.is_negative());
    n.sqrt()
}

pub fn is_perfect_square_big(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

pub fn is_perfect_square_i128(n: i128) -> bool {
    if n < 0 {
        return false;
    }
    let r = (n as f64).sqrt() as i128;
    for c in r.saturating_sub(2)..=r + 2 {
        if c >= 0 && c * c == n {
            return true;
        }
    }
    false
}

/// Product of the distinct primes dividing |n|.
pub fn radical(n: &BigInt) -> BigInt {
    factor_bigint(n)
        .into_iter()
        .fold(BigInt::one(), |acc, (p, _)| acc * p)
}
