//! Read-only LMFDB cross-checking, fixture-first.
//!
//! Curve records (a-invariants, conductor, isogeny-class size, a_p lists) are
//! read from committed JSON fixtures so that everything works offline and
//! deterministically; live HTTP access against the LMFDB API is opt-in and is
//! normalized to the same record shape.  The client exists to cross-check
//! locally computed data against an independent source, never as the source
//! of truth for computations.

use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::ec_arith::EllipticCurve;
use crate::error::{Error, Result};

/// Where a record came from; fixture replay is byte-deterministic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum RecordSource {
    #[default]
    Fixture,
    Live,
}

/// One elliptic curve as recorded externally.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveRecord {
    pub label: String,
    /// [a1, a2, a3, a4, a6]
    pub ainvs: [i64; 5],
    pub conductor: u64,
    pub isogeny_class_size: u64,
    /// (p, a_p) pairs for good primes, ascending.
    pub ap: Vec<(u64, i64)>,
    #[serde(default)]
    pub source: RecordSource,
}

impl CurveRecord {
    pub fn curve(&self) -> Result<EllipticCurve> {
        let [a1, a2, a3, a4, a6] = self.ainvs;
        EllipticCurve::new(
            BigInt::from(a1),
            BigInt::from(a2),
            BigInt::from(a3),
            BigInt::from(a4),
            BigInt::from(a6),
        )
    }
}

/// Fixture directory: `LEVELRAISER_FIXTURES` if set, else the `fixtures/lmfdb`
/// directory next to the workspace the crate was built from.
pub fn fixture_dir() -> PathBuf {
    if let Ok(dir) = std::env::var("LEVELRAISER_FIXTURES") {
        return PathBuf::from(dir);
    }
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures/lmfdb")
        .components()
        .collect()
}

fn valid_label(label: &str) -> bool {
    !label.is_empty()
        && label
            .chars()
            .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '.')
}

fn load_fixture(label: &str) -> Result<Option<CurveRecord>> {
    let path = fixture_dir().join(format!("{label}.json"));
    if !path.exists() {
        return Ok(None);
    }
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Error::Internal(format!("cannot read fixture {}: {e}", path.display())))?;
    let mut record: CurveRecord = serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("fixture {label}: {e}")))?;
    record.source = RecordSource::Fixture;
    validate_record(&record)?;
    Ok(Some(record))
}

fn validate_record(record: &CurveRecord) -> Result<()> {
    let curve = record.curve()?; // rejects singular a-invariants
    if record.conductor == 0 || record.isogeny_class_size == 0 {
        return Err(Error::Parse(format!(
            "record {} has empty conductor or class size",
            record.label
        )));
    }
    let mut last = 0u64;
    for &(p, _) in &record.ap {
        if p <= last {
            return Err(Error::Parse(format!(
                "record {}: a_p list not strictly ascending at {p}",
                record.label
            )));
        }
        last = p;
    }
    let _ = curve;
    Ok(())
}

/// Fetch a curve record by LMFDB label.  Fixtures win; with `offline` set, a
/// missing fixture is NetworkUnavailable.  Live mode queries the LMFDB API
/// (base URL overridable via `LEVELRAISER_LMFDB_URL`) and normalizes the
/// response to the fixture schema, computing the a_p list locally.
pub fn fetch_curve(label: &str, offline: bool) -> Result<CurveRecord> {
    if !valid_label(label) {
        return Err(Error::Parse(format!(
            "label {label:?} is not a plain LMFDB curve label"
        )));
    }
    if let Some(record) = load_fixture(label)? {
        return Ok(record);
    }
    if offline {
        return Err(Error::NetworkUnavailable(format!(
            "offline and no fixture for label {label}"
        )));
    }
    fetch_live(label)
}

fn fetch_live(label: &str) -> Result<CurveRecord> {
    let base = std::env::var("LEVELRAISER_LMFDB_URL")
        .unwrap_or_else(|_| "https://www.lmfdb.org".to_string());
    let url = format!(
        "{base}/api/ec_curvedata/?lmfdb_label={label}&_format=json&_fields=lmfdb_label,ainvs,conductor,class_size"
    );
    let body: serde_json::Value = ureq::get(&url)
        .timeout(std::time::Duration::from_secs(20))
        .call()
        .map_err(|e| Error::NetworkUnavailable(format!("GET {url}: {e}")))?
        .into_json()
        .map_err(|e| Error::NetworkUnavailable(format!("bad response from {url}: {e}")))?;
    let rows = body
        .get("data")
        .and_then(|d| d.as_array())
        .ok_or_else(|| Error::Parse("API response has no data array".into()))?;
    let row = rows
        .first()
        .ok_or_else(|| Error::NotFound(format!("no curve with label {label}")))?;
    let get_u64 = |key: &str| -> Result<u64> {
        row.get(key)
            .and_then(|v| v.as_u64())
            .ok_or_else(|| Error::Parse(format!("API row missing {key}")))
    };
    let ainvs_raw = row
        .get("ainvs")
        .and_then(|v| v.as_array())
        .ok_or_else(|| Error::Parse("API row missing ainvs".into()))?;
    if ainvs_raw.len() != 5 {
        return Err(Error::Parse("ainvs must have 5 entries".into()));
    }
    let mut ainvs = [0i64; 5];
    for (i, v) in ainvs_raw.iter().enumerate() {
        ainvs[i] = v
            .as_i64()
            .ok_or_else(|| Error::Parse("non-integer a-invariant".into()))?;
    }
    let mut record = CurveRecord {
        label: label.to_string(),
        ainvs,
        conductor: get_u64("conductor")?,
        isogeny_class_size: get_u64("class_size")?,
        ap: Vec::new(),
        source: RecordSource::Live,
    };
    // normalize to the fixture schema: a_p for good p <= 100, computed locally
    let curve = record.curve()?;
    for (p, ap) in curve.ap_range(100) {
        record.ap.push((p, ap));
    }
    validate_record(&record)?;
    Ok(record)
}

/// Look for a committed fixture describing the same curve (same minimal
/// model).  Used to resolve conductors and isogeny-class sizes offline.
pub fn fixture_for_curve(e: &EllipticCurve) -> Option<CurveRecord> {
    let (target, _) = e.minimal_model();
    let dir = fixture_dir();
    let mut entries: Vec<PathBuf> = std::fs::read_dir(&dir)
        .ok()?
        .filter_map(|ent| ent.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    entries.sort();
    for path in entries {
        let label = path.file_stem()?.to_str()?.to_string();
        if let Ok(Some(record)) = load_fixture(&label) {
            if let Ok(curve) = record.curve() {
                let (minimal, _) = curve.minimal_model();
                if minimal == target {
                    return Some(record);
                }
            }
        }
    }
    None
}

/// Outcome of comparing locally computed a_p against a record.
#[derive(Debug, Clone, Serialize)]
pub struct ApCrosscheck {
    pub label: String,
    pub bound: u64,
    /// primes actually compared (good for the curve, listed in the record)
    pub checked: Vec<u64>,
}

/// Assert ap(E, p) equals the recorded a_p for every good prime p <= bound
/// present in the record.  Errors with Mismatch naming the first bad prime.
pub fn crosscheck_ap(e: &EllipticCurve, record: &CurveRecord, bound: u64) -> Result<ApCrosscheck> {
    let mut checked = Vec::new();
    for &(p, expected) in &record.ap {
        if p > bound {
            break;
        }
        let computed = match e.ap(p) {
            Ok(a) => a,
            Err(Error::BadReduction { .. }) => continue,
            Err(e) => return Err(e),
        };
        if computed != expected {
            return Err(Error::Mismatch(format!(
                "a_{p}: computed {computed}, record {} says {expected}",
                record.label
            )));
        }
        checked.push(p);
    }
    Ok(ApCrosscheck {
        label: record.label.clone(),
        bound,
        checked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_load_with_expected_fields() {
        let r11 = fetch_curve("11.a2", true).unwrap();
        assert_eq!(r11.conductor, 11);
        assert_eq!(r11.isogeny_class_size, 3);
        assert_eq!(r11.ainvs, [0, -1, 1, -10, -20]);
        assert_eq!(r11.source, RecordSource::Fixture);
        let r43 = fetch_curve("43.a1", true).unwrap();
        assert_eq!(r43.conductor, 43);
        assert_eq!(r43.isogeny_class_size, 1);
    }

    #[test]
    fn unknown_label_offline_is_network_unavailable() {
        assert!(matches!(
            fetch_curve("9999.z9", true),
            Err(Error::NetworkUnavailable(_))
        ));
    }

    #[test]
    fn hostile_label_is_rejected() {
        assert!(matches!(
            fetch_curve("../etc/passwd", true),
            Err(Error::Parse(_))
        ));
        assert!(matches!(fetch_curve("", true), Err(Error::Parse(_))));
    }

    #[test]
    fn crosscheck_matches_point_counts() {
        for label in ["11.a2", "43.a1"] {
            let record = fetch_curve(label, true).unwrap();
            let e = record.curve().unwrap();
            let report = crosscheck_ap(&e, &record, 100).unwrap();
            assert!(report.checked.len() >= 20, "few checks at {label}");
        }
    }

    #[test]
    fn perturbed_record_is_caught() {
        let mut record = fetch_curve("43.a1", true).unwrap();
        let e = record.curve().unwrap();
        record.ap[3].1 += 1;
        let bad_p = record.ap[3].0;
        match crosscheck_ap(&e, &record, 100) {
            Err(Error::Mismatch(msg)) => assert!(msg.contains(&format!("a_{bad_p}"))),
            other => panic!("expected Mismatch, got {other:?}"),
        }
    }

    #[test]
    fn vacuous_bound_passes() {
        let record = fetch_curve("43.a1", true).unwrap();
        let e = record.curve().unwrap();
        let report = crosscheck_ap(&e, &record, 1).unwrap();
        assert!(report.checked.is_empty());
    }

    #[test]
    fn fixture_found_by_ainvs_even_for_rescaled_models() {
        // u = 2 rescaling of 43a minimalizes back to the fixture curve
        let scaled: EllipticCurve = "[0,4,8,0,0]".parse().unwrap();
        let record = fixture_for_curve(&scaled).expect("fixture should match");
        assert_eq!(record.label, "43.a1");
        assert!(fixture_for_curve(&"[1,1,1,1,1]".parse().unwrap()).is_none());
    }
}
