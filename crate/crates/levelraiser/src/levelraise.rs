//! End-to-end level raising for the newforms attached to rational elliptic
//! curves: planning which residue characteristics support a congruence,
//! checking the Galois-theoretic hypotheses, and certifying the raised
//! congruence with an explicit, re-checkable eigensystem witness.
//!
//! Fix a curve E of conductor N (equivalently its weight-2 newform f) and a
//! prime p of good reduction.  Level raising at p asks for a newform g of
//! level Mp with M | N, new at p, whose Hecke eigenvalues away from Np agree
//! with those of f modulo a prime above ell.  Ribet's criterion says this
//! happens exactly when a_p(E) = eps (p + 1) mod ell for a sign eps, and for
//! odd ell the raised form can be pinned down further by U_p g = eps g.
//! Since a_p(E) is a rational integer the candidate pairs (ell, eps) are
//! read off the factorizations of p + 1 - a_p and p + 1 + a_p: `plan` lists
//! them, `verify` searches the mod-ell new subspace at the raised level for
//! a joint eigenvector realizing the congruence, and `check_hypotheses`
//! gathers the irreducibility and discriminant conditions under which the
//! raised level is forced to be exactly Np rather than a proper divisor.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::coeff_arith::{AlgebraicCoefficient, CongruenceCharacteristic};
use crate::ec_arith::{EllipticCurve, GaloisKind, ReductionType};
use crate::error::{Error, Result};
use crate::lmfdb;
use crate::modsym::{self, EigensystemWitness, ModularSymbolSpace};
use crate::polyz;

/// The primes ell for which an elliptic curve over Q can admit a rational
/// ell-isogeny, by Mazur's isogeny theorem.  For ell outside this list the
/// mod-ell representation of every rational elliptic curve is irreducible,
/// so irreducibility certificates only ever need to cover these twelve.
pub const MAZUR_T: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 37, 43, 67, 163];

pub fn mazur_t() -> &'static [u64] {
    &MAZUR_T
}

/// How far `check_hypotheses` scans for certifying Frobenius primes.
const CERTIFICATE_BOUND: u64 = 200;

// ---------------------------------------------------------------------------
// Irreducibility certificates
// ---------------------------------------------------------------------------

/// Search for a Frobenius certificate that the mod-ell representation of E
/// is irreducible: a prime q of good reduction, distinct from ell, whose
/// Frobenius charpoly x^2 - a_q x + q is irreducible over F_ell.  A
/// reducible representation would force every such charpoly to split, so a
/// single irreducible one settles the question.  Returns the least
/// certifying q up to `bound`; None means the scan was inconclusive, never
/// that the representation is reducible.
///
/// For odd ell an irreducible representation here is automatically
/// absolutely irreducible: complex conjugation acts with the distinct
/// eigenvalues 1 and -1, and a one-dimensional invariant line over the
/// algebraic closure would have to be one of its eigenlines, contradicting
/// irreducibility over F_ell.  At ell = 2 the two eigenvalues collapse, so
/// pair the certificate with an S3 two-division field instead (reported by
/// `check_hypotheses`).
pub fn irreducibility_certificate(e: &EllipticCurve, ell: u64, bound: u64) -> Option<u64> {
    arith::primes_up_to(bound)
        .into_iter()
        .find(|&q| certificate_check(e, ell, q).is_ok())
}

/// Re-verify a claimed certificate pair (ell, q): both prime, q a prime of
/// good reduction distinct from ell, and x^2 - a_q x + q irreducible mod
/// ell.  Pure recomputation, no caching.
pub fn certificate_check(e: &EllipticCurve, ell: u64, q: u64) -> Result<()> {
    if !arith::is_prime_u64(ell) || !arith::is_prime_u64(q) {
        return Err(Error::CertificateFailure(format!(
            "certificate pair (ell, q) = ({ell}, {q}) must consist of primes"
        )));
    }
    if q == ell {
        return Err(Error::CertificateFailure(format!(
            "certifying prime q = {q} must differ from ell"
        )));
    }
    let (emin, _) = e.minimal_model();
    if (emin.discriminant() % BigInt::from(q)).is_zero() {
        return Err(Error::CertificateFailure(format!(
            "q = {q} is a prime of bad reduction"
        )));
    }
    let aq = e.ap(q)?;
    let charpoly = vec![BigInt::from(q), BigInt::from(-aq), BigInt::from(1)];
    match polyz::irreducible_mod_small_degree(&charpoly, ell) {
        Some(true) => Ok(()),
        _ => Err(Error::CertificateFailure(format!(
            "x^2 - ({aq}) x + {q} is reducible mod {ell}"
        ))),
    }
}

// ---------------------------------------------------------------------------
// Hypothesis report
// ---------------------------------------------------------------------------

/// Everything decidable about a curve before any witness search.
///
/// `exact_level_conditions` records, in order, the four conditions under
/// which a form congruent to the curve's newform must live at exactly Np
/// rather than at a proper divisor of it:
///
///   0. the isogeny class of E is trivial (no rational isogenies),
///   1. the two-division field Q(E[2]) has degree 6 (full S3),
///   2. E is semistable with good reduction at 2 (odd squarefree conductor),
///   3. the minimal discriminant is squarefree.
///
/// An entry is None when the evidence is unavailable (condition 0 needs a
/// bundled curve record), never guessed.  `discriminant_positive` and the
/// two-division degree are reported side by side and independently: no
/// implication between them is asserted.
#[derive(Clone, Debug, Serialize)]
pub struct HypothesisReport {
    pub curve: String,
    pub certificate_bound: u64,
    /// (ell, least certifying q) over MAZUR_T; None means uncertified.
    pub certificates: Vec<(u64, Option<u64>)>,
    pub all_torsion_primes_certified: bool,
    pub two_division_degree: u32,
    /// From the bundled curve records, when the curve is recognized.
    pub isogeny_class_size: Option<u64>,
    pub discriminant_positive: bool,
    pub discriminant_squarefree: bool,
    pub reduction_at_two: ReductionType,
    pub semistable: bool,
    pub exact_level_conditions: [Option<bool>; 4],
    pub exact_level_forced: Option<bool>,
}

pub fn check_hypotheses(e: &EllipticCurve) -> HypothesisReport {
    let (emin, _) = e.minimal_model();
    let disc = emin.discriminant();
    let certificates: Vec<(u64, Option<u64>)> = MAZUR_T
        .iter()
        .map(|&ell| (ell, irreducibility_certificate(e, ell, CERTIFICATE_BOUND)))
        .collect();
    let all_certified = certificates.iter().all(|(_, q)| q.is_some());
    let two_division_degree = e.two_division().kind.field_degree();
    let isogeny_class_size = lmfdb::fixture_for_curve(e).map(|r| r.isogeny_class_size);
    let squarefree = arith::factor_bigint(&disc.abs()).iter().all(|(_, k)| *k == 1);
    let reduction_at_two = e.reduction_type(2);
    let semistable = e.conductor_if_semistable().is_some();
    let conditions = [
        isogeny_class_size.map(|s| s == 1),
        Some(two_division_degree == 6),
        Some(semistable && reduction_at_two == ReductionType::Good),
        Some(squarefree),
    ];
    let forced = if conditions.iter().any(|c| *c == Some(false)) {
        Some(false)
    } else if conditions.iter().all(|c| c.is_some()) {
        Some(true)
    } else {
        None
    };
    HypothesisReport {
        curve: e.to_string(),
        certificate_bound: CERTIFICATE_BOUND,
        certificates,
        all_torsion_primes_certified: all_certified,
        two_division_degree,
        isogeny_class_size,
        discriminant_positive: disc.is_positive(),
        discriminant_squarefree: squarefree,
        reduction_at_two,
        semistable,
        exact_level_conditions: conditions,
        exact_level_forced: forced,
    }
}

// ---------------------------------------------------------------------------
// Planning
// ---------------------------------------------------------------------------

/// The congruence plan at (E, p): one entry per pair (ell, eps) with
/// a_p = eps (p + 1) mod ell, i.e. per prime factor of p + 1 - eps a_p.
///
/// `unit_obstructed` marks the degenerate case where both shifted norms are
/// units and the plan is empty.  For a degree-1 coefficient that would need
/// (p + 1)^2 - a_p^2 = 1, impossible for any prime p with |a_p| <= 2 sqrt p,
/// so the flag only ever fires for genuinely algebraic coefficients fed
/// through `plan_coefficient` (p = 2 with a_2^2 = 8).
#[derive(Clone, Debug, Serialize)]
pub struct RaisePlan {
    pub source: String,
    pub p: u64,
    pub unit_obstructed: bool,
    pub characteristics: Vec<CongruenceCharacteristic>,
    pub notes: Vec<String>,
}

/// Plan level raising for an elliptic curve at a prime p of good reduction.
pub fn plan(e: &EllipticCurve, p: u64, avoid_p: bool) -> Result<RaisePlan> {
    let a = e.ap(p)?;
    let coeff = AlgebraicCoefficient::rational(p, a)?;
    let mut rp = plan_coefficient(&coeff, avoid_p);
    rp.source = e.to_string();
    Ok(rp)
}

/// Plan level raising for a bare Fourier coefficient, rational or not.
pub fn plan_coefficient(coeff: &AlgebraicCoefficient, avoid_p: bool) -> RaisePlan {
    let p = coeff.p;
    let unit_obstructed = coeff.is_unit_obstructed();
    let mut characteristics = coeff.congruence_characteristics();
    let mut notes = Vec::new();
    if unit_obstructed {
        notes.push(format!(
            "both shifted norms N(p + 1 -+ a_p) are units at p = {p}: no congruence prime exists"
        ));
    } else {
        notes.push(
            "each (ell, eps) supports a congruence to a p-new form, with U_p sign eps \
             when ell is odd"
                .to_string(),
        );
    }
    if avoid_p {
        characteristics.retain(|c| c.avoids_p);
        if p > 2 {
            notes.push(format!(
                "entries with ell = p dropped; for p = {p} > 2 some characteristic away \
                 from p always survives"
            ));
        } else {
            notes.push("entries with ell = p dropped; at p = 2 none may survive".to_string());
        }
    }
    RaisePlan {
        source: format!(
            "coefficient at p = {p} with charpoly {}",
            polyz::to_string_pretty(&coeff.charpoly)
        ),
        p,
        unit_obstructed,
        characteristics,
        notes,
    }
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

/// Outcome grade of a witness search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RaiseStatus {
    /// Joint eigenvector found and re-checked, with the U_p sign imposed.
    Witnessed,
    /// Found at ell = 2, where an eigensystem cannot see the sign eps.
    WitnessedWithL2Caveat,
    /// No witness at any candidate level.
    NotFound,
}

/// A re-checkable level-raising certificate.  Plain data: given only the
/// serialized form, `verify_certificate` reconstructs the curve, the Hecke
/// targets, and the modular-symbol space, and re-runs every check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RaiseCertificate {
    pub curve: String,
    pub p: u64,
    pub ell: u64,
    pub epsilon: i8,
    pub conductor: u64,
    pub level: u64,
    /// Hecke targets were taken at good primes q <= cutoff, q coprime to
    /// conductor * p * ell.
    pub cutoff: u64,
    /// Whether the cutoff reaches the classical index/6 coefficient bound
    /// at the witnessing level.  The targets still skip the primes dividing
    /// the level and ell, so this grades coverage, nothing more.
    pub sturm_complete: bool,
    pub status: RaiseStatus,
    pub witness: EigensystemWitness,
}

/// Immutable, shareable modular-symbol spaces keyed by level.  Building the
/// space is the expensive half of a verification job; searches for distinct
/// (ell, eps) at the same level share one copy.
pub struct SpaceCache {
    inner: Mutex<HashMap<u64, Arc<ModularSymbolSpace>>>,
}

impl SpaceCache {
    pub fn new() -> Self {
        SpaceCache {
            inner: Mutex::new(HashMap::new()),
        }
    }

    /// Fetch or build the space at `level`.  The lock is not held while
    /// building, so racing misses may build twice; the first insert wins.
    pub fn get(&self, level: u64) -> Result<Arc<ModularSymbolSpace>> {
        if let Some(s) = self.inner.lock().unwrap().get(&level) {
            return Ok(Arc::clone(s));
        }
        let built = Arc::new(ModularSymbolSpace::build(level)?);
        let mut map = self.inner.lock().unwrap();
        Ok(Arc::clone(map.entry(level).or_insert(built)))
    }
}

impl Default for SpaceCache {
    fn default() -> Self {
        Self::new()
    }
}

/// Weight-2 coefficient cutoff index/6 for the given index of Gamma_0.
fn sturm_cutoff(index: u64) -> u64 {
    index.div_ceil(6)
}

/// Hecke targets (q, a_q(E)) over good primes q <= cutoff coprime to
/// conductor, p and ell; shared by the search and by re-verification.
fn hecke_targets(
    e: &EllipticCurve,
    conductor: u64,
    p: u64,
    ell: u64,
    cutoff: u64,
) -> Result<Vec<(u64, i64)>> {
    let mut targets = Vec::new();
    for q in arith::primes_up_to(cutoff) {
        if conductor % q == 0 || q == p || q == ell {
            continue;
        }
        targets.push((q, e.ap(q)?));
    }
    Ok(targets)
}

/// The conductor: as supplied, else from a bundled curve record matching
/// the curve, else the bad-prime product when the curve is semistable.
fn resolve_conductor(e: &EllipticCurve, supplied: Option<u64>) -> Result<u64> {
    if let Some(n) = supplied {
        return Ok(n);
    }
    if let Some(rec) = lmfdb::fixture_for_curve(e) {
        return Ok(rec.conductor);
    }
    if let Some(n) = e.conductor_if_semistable() {
        return n
            .to_u64()
            .ok_or_else(|| Error::Internal("conductor exceeds u64".into()));
    }
    Err(Error::PreconditionFailed(
        "conductor unknown: supply it explicitly for curves with additive reduction \
         and no bundled record"
            .into(),
    ))
}

fn divisors(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (p, e) in arith::factor_u64(n) {
        let mut next = Vec::new();
        for d in &divs {
            let mut pe = 1u64;
            for k in 0..=e {
                next.push(d * pe);
                if k < e {
                    pe *= p;
                }
            }
        }
        divs = next;
    }
    divs.sort_unstable();
    divs
}

/// Search for a level-raising witness for (E, p, ell, eps): a nonzero joint
/// mod-ell eigenvector in the new subspace at level Np (or Mp over divisors
/// M | N in descending order, when `try_lower_levels`) matching a_q(E) at
/// every good q <= cutoff coprime to Npell, with U_p = eps imposed for odd
/// ell.  The pair (ell, eps) normally comes from `plan`; a pair outside the
/// plan is allowed and simply comes back NotFound, which is the cheap way
/// to watch the wrong sign fail.
pub fn verify(
    e: &EllipticCurve,
    p: u64,
    ell: u64,
    epsilon: i8,
    cutoff: u64,
    try_lower_levels: bool,
    conductor: Option<u64>,
) -> Result<RaiseCertificate> {
    let cache = SpaceCache::new();
    verify_with_cache(e, p, ell, epsilon, cutoff, try_lower_levels, conductor, &cache)
}

/// `verify`, sharing modular-symbol spaces through the supplied cache.
#[allow(clippy::too_many_arguments)]
pub fn verify_with_cache(
    e: &EllipticCurve,
    p: u64,
    ell: u64,
    epsilon: i8,
    cutoff: u64,
    try_lower_levels: bool,
    conductor: Option<u64>,
    cache: &SpaceCache,
) -> Result<RaiseCertificate> {
    if !arith::is_prime_u64(p) || !arith::is_prime_u64(ell) {
        return Err(Error::PreconditionFailed(format!(
            "p = {p} and ell = {ell} must both be prime"
        )));
    }
    if epsilon != 1 && epsilon != -1 {
        return Err(Error::PreconditionFailed(format!(
            "eps = {epsilon} must be +1 or -1"
        )));
    }
    e.ap(p)?; // insist on good reduction at p
    let n = resolve_conductor(e, conductor)?;
    if n % p == 0 {
        return Err(Error::BadReduction { p });
    }
    let targets = hecke_targets(e, n, p, ell, cutoff)?;
    let up = if ell % 2 == 1 {
        Some((p, i64::from(epsilon)))
    } else {
        None
    };
    let levels: Vec<u64> = if try_lower_levels {
        let mut ms = divisors(n);
        ms.sort_unstable_by(|a, b| b.cmp(a));
        ms.into_iter().map(|m| m * p).collect()
    } else {
        vec![n * p]
    };
    for &level in &levels {
        let space = cache.get(level)?;
        match modsym::congruence_witness(&space, ell, &targets, up) {
            Ok(witness) => {
                let status = if witness.mod_two_caveat {
                    RaiseStatus::WitnessedWithL2Caveat
                } else {
                    RaiseStatus::Witnessed
                };
                return Ok(RaiseCertificate {
                    curve: e.to_string(),
                    p,
                    ell,
                    epsilon,
                    conductor: n,
                    level,
                    cutoff,
                    sturm_complete: cutoff >= sturm_cutoff(space.invariants.index),
                    status,
                    witness,
                });
            }
            Err(Error::NotFound(_)) => continue,
            Err(other) => return Err(other),
        }
    }
    Err(Error::NotFound(format!(
        "no nonzero mod-{ell} eigensystem with the requested targets in the new \
         subspace at level{} {}",
        if levels.len() > 1 { "s" } else { "" },
        levels
            .iter()
            .map(|l| l.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    )))
}

/// Re-check a certificate from its serialized data alone: parse the curve,
/// confirm (ell, eps) sits in the congruence plan, recompute every Hecke
/// target from scratch, rebuild the space at the recorded level, and re-run
/// the witness verification.
pub fn verify_certificate(cert: &RaiseCertificate) -> Result<()> {
    let e: EllipticCurve = cert.curve.parse()?;
    if cert.status == RaiseStatus::NotFound {
        return Err(Error::CertificateFailure(
            "certificate records no witness".into(),
        ));
    }
    let rp = plan(&e, cert.p, false)?;
    if !rp
        .characteristics
        .iter()
        .any(|c| c.ell == cert.ell && c.epsilon == cert.epsilon)
    {
        return Err(Error::CertificateFailure(format!(
            "(ell, eps) = ({}, {:+}) is not in the congruence plan at p = {}",
            cert.ell, cert.epsilon, cert.p
        )));
    }
    if cert.level % cert.p != 0 || cert.conductor % (cert.level / cert.p) != 0 {
        return Err(Error::CertificateFailure(format!(
            "level {} is not p = {} times a divisor of the conductor {}",
            cert.level, cert.p, cert.conductor
        )));
    }
    let w = &cert.witness;
    if w.level != cert.level || w.ell != cert.ell {
        return Err(Error::CertificateFailure(
            "witness level or residue characteristic disagrees with the certificate".into(),
        ));
    }
    let expected_up = if cert.ell % 2 == 1 {
        Some((cert.p, i64::from(cert.epsilon)))
    } else {
        None
    };
    if w.up_target != expected_up {
        return Err(Error::CertificateFailure(
            "witness U_p target disagrees with the certificate".into(),
        ));
    }
    let expected_status = if w.mod_two_caveat {
        RaiseStatus::WitnessedWithL2Caveat
    } else {
        RaiseStatus::Witnessed
    };
    if cert.status != expected_status {
        return Err(Error::CertificateFailure(
            "status grade disagrees with the witness's mod-2 caveat flag".into(),
        ));
    }
    let expected_targets = hecke_targets(&e, cert.conductor, cert.p, cert.ell, cert.cutoff)?;
    if w.targets != expected_targets {
        return Err(Error::CertificateFailure(
            "recorded Hecke targets disagree with the curve's coefficients".into(),
        ));
    }
    let space = ModularSymbolSpace::build(cert.level)?;
    if cert.sturm_complete != (cert.cutoff >= sturm_cutoff(space.invariants.index)) {
        return Err(Error::CertificateFailure(
            "coverage flag disagrees with the index/6 bound at the level".into(),
        ));
    }
    modsym::verify_witness(&space, w)
}

// ---------------------------------------------------------------------------
// Residue bookkeeping for full congruences
// ---------------------------------------------------------------------------

/// What a witnessed congruence does NOT claim: agreement of every Fourier
/// coefficient, a_p included.  A congruence of all coefficients with a form
/// whose a_p is eps = +-1 forces either ell = p or a_p(E) = eps mod ell, so
/// comparing these two residues measures how far the certificate extends.
#[derive(Clone, Debug, Serialize)]
pub struct FullCongruenceReport {
    pub p: u64,
    pub ell: u64,
    pub epsilon: i8,
    pub ap: i64,
    /// ell = p: the one case that this residue test can never obstruct.
    pub same_characteristic: bool,
    pub residues_agree: bool,
    pub full_congruence_excluded: bool,
    pub note: String,
}

pub fn full_congruence_check(
    e: &EllipticCurve,
    p: u64,
    ell: u64,
    epsilon: i8,
) -> Result<FullCongruenceReport> {
    let ap = e.ap(p)?;
    let same_characteristic = ell == p;
    let residues_agree =
        (i128::from(ap) - i128::from(epsilon)).rem_euclid(i128::from(ell)) == 0;
    let full_congruence_excluded = !same_characteristic && !residues_agree;
    let note = if same_characteristic {
        format!("ell = p = {p}: a full coefficient congruence is consistent with this data")
    } else if full_congruence_excluded {
        format!(
            "a_p = {ap} is not {epsilon:+} mod {ell}: the witnessed congruence cannot \
             extend to a_p unless ell = p"
        )
    } else {
        format!(
            "a_p = {ap} happens to equal {epsilon:+} mod {ell}: this residue test does \
             not obstruct a full congruence"
        )
    };
    Ok(FullCongruenceReport {
        p,
        ell,
        epsilon,
        ap,
        same_characteristic,
        residues_agree,
        full_congruence_excluded,
        note,
    })
}

// ---------------------------------------------------------------------------
// Auxiliary primes
// ---------------------------------------------------------------------------

/// Primes q supporting the auxiliary congruence tricks at p: q = 3 mod 4,
/// q coprime to 2 disc p, Frobenius of order 3 on the 2-torsion, and p a
/// square mod q.  `density` is measured against all primes up to the bound.
#[derive(Clone, Debug, Serialize)]
pub struct AuxPrimeScan {
    pub p: u64,
    pub bound: u64,
    pub primes: Vec<u64>,
    pub primes_scanned: usize,
    pub density: f64,
}

/// Sieve the auxiliary primes for (E, p) up to `bound`.  Requires the full
/// S3 two-division field, so that order-3 Frobenius classes exist, and
/// Q(sqrt(disc)) distinct from Q(i), so that the order-3 and 3-mod-4
/// conditions can hold at once; both are checked up front.
pub fn aux_primes(e: &EllipticCurve, p: u64, bound: u64) -> Result<AuxPrimeScan> {
    let td = e.two_division();
    if td.kind != GaloisKind::S3 {
        return Err(Error::PreconditionFailed(format!(
            "2-division field has degree {}; the auxiliary-prime sieve needs the full \
             S3 field of degree 6",
            td.kind.field_degree()
        )));
    }
    let disc = e.discriminant();
    if arith::is_perfect_square_big(&(-&disc)) {
        return Err(Error::PreconditionFailed(
            "Q(sqrt(disc)) = Q(i): primes q = 3 mod 4 are inert there and the sieve \
             is empty by design"
                .into(),
        ));
    }
    let dabs = disc.abs();
    let candidates = arith::primes_up_to(bound);
    let primes_scanned = candidates.len();
    let mut primes = Vec::new();
    for q in candidates {
        if q % 4 != 3 || q == p {
            continue;
        }
        if (&dabs % BigInt::from(q)).is_zero() {
            continue;
        }
        if !matches!(e.frob_order_in_s3(q), Ok(3)) {
            continue;
        }
        if arith::legendre_u64(p as i64, q) != 1 {
            continue;
        }
        primes.push(q);
    }
    let density = primes.len() as f64 / primes_scanned.max(1) as f64;
    Ok(AuxPrimeScan {
        p,
        bound,
        primes,
        primes_scanned,
        density,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e11a() -> EllipticCurve {
        "[0,-1,1,-10,-20]".parse().unwrap()
    }

    fn e43a() -> EllipticCurve {
        "[0,1,1,0,0]".parse().unwrap()
    }

    /// A curve reducing mod 1427 to the distinguished fibre of the cubic
    /// family used throughout the family module.
    fn family_lift() -> EllipticCurve {
        EllipticCurve::short(33, -22).unwrap()
    }

    #[test]
    fn mazur_t_is_the_rational_isogeny_list() {
        assert_eq!(MAZUR_T.len(), 12);
        assert!(MAZUR_T.contains(&163));
        assert!(!MAZUR_T.contains(&23));
        assert!(MAZUR_T.iter().all(|&ell| arith::is_prime_u64(ell)));
        assert!(MAZUR_T.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(mazur_t(), &MAZUR_T);
    }

    #[test]
    fn frobenius_certificates_known_answers() {
        // 43a mod 2: a_3, a_5, a_7 are all even, a_11 = 3 is the first odd
        // coefficient, and x^2 + x + 1 is the only irreducible quadratic
        // mod 2.
        assert_eq!(irreducibility_certificate(&e43a(), 2, 50), Some(11));
        assert!(certificate_check(&e43a(), 2, 11).is_ok());
        assert!(certificate_check(&e43a(), 2, 7).is_err());
        // 11a has a rational 5-isogeny, so every Frobenius charpoly splits
        // mod 5 and no certificate can exist at any bound.
        assert_eq!(irreducibility_certificate(&e11a(), 5, 100), None);
        // but 11a is fine at 3 and 7
        assert!(irreducibility_certificate(&e11a(), 3, 100).is_some());
        assert!(irreducibility_certificate(&e11a(), 7, 100).is_some());
    }

    #[test]
    fn family_reduction_certificate_at_1427() {
        let e = family_lift();
        assert_eq!(e.ap(1427).unwrap(), 4);
        for &ell in MAZUR_T.iter().filter(|&&ell| ell != 2) {
            assert!(
                certificate_check(&e, ell, 1427).is_ok(),
                "x^2 - 4x + 1427 should be irreducible mod {ell}"
            );
        }
        // Mod 2 the charpoly is x^2 + 1 = (x + 1)^2: the even coefficient
        // a_1427 = 4 can certify nothing at ell = 2.
        assert!(certificate_check(&e, 2, 1427).is_err());
    }

    #[test]
    fn hypotheses_for_exact_level_curve() {
        let report = check_hypotheses(&e43a());
        assert_eq!(report.exact_level_conditions, [Some(true); 4]);
        assert_eq!(report.exact_level_forced, Some(true));
        assert_eq!(report.two_division_degree, 6);
        assert_eq!(report.isogeny_class_size, Some(1));
        assert!(!report.discriminant_positive);
        assert!(report.discriminant_squarefree);
        assert!(report.semistable);
        assert_eq!(report.reduction_at_two, ReductionType::Good);
        assert!(report.all_torsion_primes_certified);
    }

    #[test]
    fn hypotheses_flag_failures() {
        let report = check_hypotheses(&e11a());
        // rational 5-isogeny: uncertifiable at 5, class of size 3 on file
        let at5 = report.certificates.iter().find(|(ell, _)| *ell == 5).unwrap();
        assert_eq!(at5.1, None);
        assert!(!report.all_torsion_primes_certified);
        assert_eq!(report.isogeny_class_size, Some(3));
        assert_eq!(report.exact_level_conditions[0], Some(false));
        // minimal discriminant -11^5 is not squarefree
        assert_eq!(report.exact_level_conditions[3], Some(false));
        assert_eq!(report.exact_level_forced, Some(false));
        // the rest of the picture is healthy
        assert_eq!(report.two_division_degree, 6);
        assert!(report.semistable);
        assert_eq!(report.reduction_at_two, ReductionType::Good);
    }

    #[test]
    fn plan_lists_the_shift_factorizations() {
        // a_7(11a) = -2: factor 7 + 1 - (-2) = 10 and 7 + 1 + (-2) = 6
        let rp = plan(&e11a(), 7, false).unwrap();
        let pairs: Vec<(u64, i8)> = rp.characteristics.iter().map(|c| (c.ell, c.epsilon)).collect();
        assert_eq!(pairs.len(), 4);
        for want in [(2, -1), (3, -1), (2, 1), (5, 1)] {
            assert!(pairs.contains(&want), "missing {want:?}");
        }
        assert!(!rp.unit_obstructed);

        // a_5(43a) = -4: factor 10 and 2; avoiding p = 5 drops (5, +1)
        let rp = plan(&e43a(), 5, false).unwrap();
        let pairs: Vec<(u64, i8)> = rp.characteristics.iter().map(|c| (c.ell, c.epsilon)).collect();
        assert_eq!(pairs.len(), 3);
        for want in [(2, 1), (5, 1), (2, -1)] {
            assert!(pairs.contains(&want), "missing {want:?}");
        }
        let avoided = plan(&e43a(), 5, true).unwrap();
        let pairs: Vec<(u64, i8)> =
            avoided.characteristics.iter().map(|c| (c.ell, c.epsilon)).collect();
        assert_eq!(pairs, vec![(2, 1), (2, -1)]);

        // a_3 = 0 for y^2 = x^3 + x: both shifts are 4
        let e = EllipticCurve::short(1, 0).unwrap();
        let rp = plan(&e, 3, false).unwrap();
        let pairs: Vec<(u64, i8)> = rp.characteristics.iter().map(|c| (c.ell, c.epsilon)).collect();
        assert_eq!(pairs, vec![(2, 1), (2, -1)]);

        // bad reduction is refused
        assert!(matches!(plan(&e11a(), 11, false), Err(Error::BadReduction { p: 11 })));
    }

    #[test]
    fn plan_coefficient_unit_obstruction() {
        // a_2 = sqrt 8 is the unique unit-obstructed coefficient shape
        let c = AlgebraicCoefficient::new(2, vec![BigInt::from(-8), BigInt::from(0), BigInt::from(1)])
            .unwrap();
        let rp = plan_coefficient(&c, false);
        assert!(rp.unit_obstructed);
        assert!(rp.characteristics.is_empty());

        // rational coefficients can never be obstructed
        for (e, p) in [(e11a(), 7u64), (e43a(), 5), (e43a(), 2)] {
            let rp = plan(&e, p, false).unwrap();
            assert!(!rp.unit_obstructed);
            assert_eq!(rp.unit_obstructed, rp.characteristics.is_empty());
        }
    }

    #[test]
    fn sign_dichotomy_matches_planner() {
        let curves = [e11a(), e43a(), EllipticCurve::short(1, 0).unwrap()];
        for e in &curves {
            for p in [3u64, 5, 7, 11, 13, 17, 19] {
                let Ok(a) = e.ap(p) else { continue };
                let rp = plan(e, p, false).unwrap();
                let s = p as i64 + 1;
                for ell in [3i64, 5, 7, 11, 13] {
                    let plus = (s - a).rem_euclid(ell) == 0;
                    let minus = (s + a).rem_euclid(ell) == 0;
                    let has_plus = rp
                        .characteristics
                        .iter()
                        .any(|c| c.ell == ell as u64 && c.epsilon == 1);
                    let has_minus = rp
                        .characteristics
                        .iter()
                        .any(|c| c.ell == ell as u64 && c.epsilon == -1);
                    assert_eq!(plus, has_plus, "({e}, {p}, {ell}, +1)");
                    assert_eq!(minus, has_minus, "({e}, {p}, {ell}, -1)");
                    if plus && minus {
                        // both signs only when ell divides 2(p+1) and 2 a_p
                        assert_eq!((2 * s).rem_euclid(ell), 0);
                        assert_eq!((2 * a).rem_euclid(ell), 0);
                    }
                }
            }
        }
    }

    #[test]
    fn witness_for_eleven_a_at_seventy_seven() {
        let cert = verify(&e11a(), 7, 3, -1, 30, false, None).unwrap();
        assert_eq!(cert.level, 77);
        assert_eq!(cert.conductor, 11);
        assert_eq!(cert.status, RaiseStatus::Witnessed);
        assert_eq!(cert.witness.up_target, Some((7, -1)));
        assert!(cert.witness.kernel_dimension >= 1);
        // index of Gamma_0(77) is 96, so the index/6 bound is 16 <= 30
        assert!(cert.sturm_complete);
        verify_certificate(&cert).unwrap();

        // the certificate is pure data: round-trip through JSON and re-check
        let json = serde_json::to_string(&cert).unwrap();
        let back: RaiseCertificate = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cert);
        verify_certificate(&back).unwrap();
    }

    #[test]
    fn wrong_sign_reports_not_found() {
        match verify(&e11a(), 7, 3, 1, 30, true, None) {
            Err(Error::NotFound(msg)) => {
                // both candidate levels 77 and 7 were tried and reported
                assert!(msg.contains("77"), "{msg}");
                assert!(msg.contains("7"), "{msg}");
            }
            other => panic!("expected NotFound, got {other:?}"),
        }
    }

    #[test]
    fn mod_two_witness_at_two_fifteen() {
        let cert = verify(&e43a(), 5, 2, 1, 30, false, None).unwrap();
        assert_eq!(cert.level, 215);
        assert_eq!(cert.status, RaiseStatus::WitnessedWithL2Caveat);
        assert!(cert.witness.mod_two_caveat);
        assert_eq!(cert.witness.up_target, None);
        assert_eq!(cert.witness.new_dimension, 30);
        // index of Gamma_0(215) is 264: the index/6 bound 44 exceeds 30
        assert!(!cert.sturm_complete);
        verify_certificate(&cert).unwrap();
    }

    #[test]
    fn tampered_certificates_fail_reverification() {
        let cert = verify(&e11a(), 7, 3, -1, 30, false, None).unwrap();

        let mut bad = cert.clone();
        bad.epsilon = 1;
        assert!(verify_certificate(&bad).is_err());

        let mut bad = cert.clone();
        bad.level = 154;
        assert!(verify_certificate(&bad).is_err());

        let mut bad = cert.clone();
        bad.witness.targets[0].1 += 3;
        assert!(verify_certificate(&bad).is_err());

        let mut bad = cert.clone();
        bad.status = RaiseStatus::WitnessedWithL2Caveat;
        assert!(verify_certificate(&bad).is_err());

        let mut bad = cert.clone();
        bad.sturm_complete = false;
        assert!(verify_certificate(&bad).is_err());

        let mut bad = cert;
        bad.witness.basis[0][0] = bad.witness.basis[0][0].wrapping_add(1) % 3;
        assert!(verify_certificate(&bad).is_err());
    }

    #[test]
    fn aux_primes_known_positive() {
        let scan = aux_primes(&e43a(), 5, 100).unwrap();
        assert!(scan.primes.contains(&11), "{:?}", scan.primes);

        let scan = aux_primes(&e43a(), 5, 200).unwrap();
        assert!(!scan.primes.is_empty());
        // re-check all four defining conditions independently
        let td = e43a().two_division();
        let disc = e43a().discriminant().abs();
        for &q in &scan.primes {
            assert_eq!(q % 4, 3);
            assert!(q != 2 && q != 5);
            assert!(!(&disc % BigInt::from(q)).is_zero());
            // order 3 in S3 means a 3-cycle: the cubic has no roots mod q
            assert_eq!(polyz::roots_mod(&td.cubic, q), 0);
            assert_eq!(arith::legendre_u64(5, q), 1);
        }
        assert!(scan.density > 0.0 && scan.density < 1.0);
    }

    #[test]
    fn aux_primes_preconditions() {
        // y^2 = x^3 - x has fully rational 2-torsion
        let split = EllipticCurve::short(-1, 0).unwrap();
        match aux_primes(&split, 5, 100) {
            Err(Error::PreconditionFailed(msg)) => assert!(msg.contains("S3"), "{msg}"),
            other => panic!("expected PreconditionFailed, got {other:?}"),
        }
        // disc = -1584^2, so Q(sqrt(disc)) = Q(i)
        match aux_primes(&family_lift(), 5, 100) {
            Err(Error::PreconditionFailed(msg)) => assert!(msg.contains("Q(i)"), "{msg}"),
            other => panic!("expected PreconditionFailed, got {other:?}"),
        }
    }

    #[test]
    fn full_congruence_residue_reports() {
        // a_5(43a) = -4 is even, eps is odd: excluded mod 2
        let r = full_congruence_check(&e43a(), 5, 2, 1).unwrap();
        assert!(r.full_congruence_excluded);
        assert!(!r.same_characteristic);

        // a_7(11a) = -2 = 3 mod 5, eps = +1: excluded mod 5
        let r = full_congruence_check(&e11a(), 7, 5, 1).unwrap();
        assert!(r.full_congruence_excluded);
        assert!(!r.residues_agree);

        // ell = p is never obstructed by this test
        let r = full_congruence_check(&e11a(), 7, 7, 1).unwrap();
        assert!(r.same_characteristic);
        assert!(!r.full_congruence_excluded);
    }

    #[test]
    fn space_cache_shares_spaces() {
        let cache = SpaceCache::new();
        let a = cache.get(11).unwrap();
        let b = cache.get(11).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
        assert_eq!(a.level, 11);
    }

    #[test]
    fn divisor_enumeration() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(43), vec![1, 43]);
        assert_eq!(divisors(1), vec![1]);
    }
}
