//! The projective line over Z/M with canonical representatives.
//!
//! A point (c : d) has gcd(c, d, M) = 1; two pairs are identified when they
//! differ by a unit of Z/M.  Normalization picks a unique representative per
//! orbit (first scale c to the divisor gcd(c, M), then minimize d over the
//! stabilizing units), so equality of normalized pairs is plain syntactic
//! equality and points can be used as hash keys.

use crate::arith::gcd_u64;

/// Canonical representative of (c : d) in P^1(Z/M), or None when
/// gcd(c, d, M) > 1 (the pair is not a projective point).
pub fn normalize(m: u64, c: i64, d: i64) -> Option<(u64, u64)> {
    if m == 1 {
        return Some((0, 0));
    }
    let mi = m as i64;
    let mut c = c.rem_euclid(mi) as u64;
    let mut d = d.rem_euclid(mi) as u64;
    if c == 0 {
        return if gcd_u64(d, m) == 1 {
            Some((0, 1))
        } else {
            None
        };
    }
    // g = gcd(c, m) = s*c mod m for the Bezout coefficient s
    let (g, s) = bezout_mod(c, m);
    if gcd_u64(g, gcd_u64(d, m)) != 1 {
        return None;
    }
    // scale the pair by the unit s: c becomes g
    let mut s = s;
    if gcd_u64(s, m) != 1 {
        // adjust s by multiples of m/g until it is a unit (always possible)
        let step = m / g;
        while gcd_u64(s, m) != 1 {
            s = (s + step) % m;
        }
    }
    c = g;
    d = d * s % m;
    if g > 1 {
        // minimize d over units congruent to 1 mod m/g, which stabilize c
        let step = m / g;
        let d_step = d * step % m;
        let mut best = d;
        let mut cur = d;
        let mut t = 1;
        for _ in 2..=g {
            cur = (cur + d_step) % m;
            t = (t + step) % m;
            if cur < best && gcd_u64(t, m) == 1 {
                best = cur;
            }
        }
        d = best;
    }
    Some((c, d))
}

/// (gcd(a, m), s) with s*a = gcd mod m, 0 <= s < m.
fn bezout_mod(a: u64, m: u64) -> (u64, u64) {
    let (mut r0, mut r1) = (a as i64, m as i64);
    let (mut s0, mut s1) = (1i64, 0i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    (r0 as u64, s0.rem_euclid(m as i64) as u64)
}

/// All points of P^1(Z/M), sorted, one canonical representative each.
pub fn p1_list(m: u64) -> Vec<(u64, u64)> {
    if m == 1 {
        return vec![(0, 0)];
    }
    let mut pts = Vec::new();
    // c = 0 orbit
    pts.push((0u64, 1u64));
    // enumerate all remaining (c, d) and keep the pairs already in
    // canonical form (cheap at the sizes we use)
    for c in 1..m {
        for d in 0..m {
            if let Some(p) = normalize(m, c as i64, d as i64) {
                if p == (c, d) {
                    pts.push(p);
                }
            }
        }
    }
    pts.sort_unstable();
    pts.dedup();
    pts
}

/// Lift a P^1 point to a matrix [[a, b], [c, d']] in SL2(Z) whose bottom row
/// reduces to (c : d) mod m.
pub fn lift_to_sl2(m: u64, c: u64, d: u64) -> [i64; 4] {
    if m == 1 {
        return [1, 0, 0, 1];
    }
    let c = c as i64;
    let mut d = d as i64;
    if c == 0 {
        // (0 : 1) up to units
        return [1, 0, 0, 1];
    }
    // adjust d by multiples of m until gcd(c, d) = 1
    while gcd_u64(c.unsigned_abs(), d.unsigned_abs()) != 1 {
        d += m as i64;
    }
    // solve a*d - b*c = 1
    let (mut r0, mut r1) = (c, d);
    let (mut x0, mut x1) = (1i64, 0i64);
    let (mut y0, mut y1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (x0, x1) = (x1, x0 - q * x1);
        (y0, y1) = (y1, y0 - q * y1);
    }
    // r0 = x0*c + y0*d = ±1
    let (s, t) = if r0 == 1 { (x0, y0) } else { (-x0, -y0) };
    // s*c + t*d = 1, so matrix [[t, -s], [c, d]] has det t*d + s*c = 1
    [t, -s, c, d]
}
