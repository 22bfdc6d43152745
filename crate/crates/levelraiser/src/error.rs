//! Error type shared by every module.
//!
//! The CLI maps each variant to a stable machine-readable name (`Error::name`),
//! so variants are part of the output contract: exit code 1 with `{"error":
//! {"name": ...}}` on stdout.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// The Weierstrass equation has discriminant zero.
    #[error("singular curve: discriminant is zero")]
    SingularCurve,

    /// Asked for a_p at a prime dividing the minimal discriminant.
    #[error("bad reduction at p = {p}")]
    BadReduction { p: u64 },

    /// cn_bound is defined for odd n >= 1 only.
    #[error("invalid degree n = {n}: need odd n >= 1")]
    InvalidDegree { n: u32 },

    /// Modular symbol space failed its genus-formula dimension check.
    #[error("dimension mismatch at level {level}: computed {computed}, genus formula gives {expected}")]
    DimensionMismatch {
        level: u64,
        computed: usize,
        expected: usize,
    },

    /// A degeneracy map or witness was requested between incompatible levels.
    #[error("level mismatch: {0}")]
    LevelMismatch(String),

    /// No eigensystem witness in the mod-ell new subspace.
    #[error("not found: {0}")]
    NotFound(String),

    /// Operation preconditions (hypotheses on the curve) do not hold.
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    /// k is not -11 mod 1427.
    #[error("k = {0} is not in the family (need k = -11 mod 1427)")]
    NotInFamily(i64),

    /// Family parameter giving a singular curve.
    #[error("family member k = {0} is singular")]
    SingularMember(i64),

    /// A certificate re-check failed; the string names the failing sub-check.
    #[error("certificate failure: {0}")]
    CertificateFailure(String),

    /// Live LMFDB access failed or was disabled.
    #[error("network unavailable: {0}")]
    NetworkUnavailable(String),

    /// Cross-check between computed and recorded values failed.
    #[error("mismatch: {0}")]
    Mismatch(String),

    /// Malformed user input (curve string, polynomial string, label).
    #[error("parse error: {0}")]
    Parse(String),

    /// Violated internal invariant; always a bug.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// Stable name used in CLI JSON output.
    pub fn name(&self) -> &'static str {
        match self {
            Error::SingularCurve => "SingularCurve",
            Error::BadReduction { .. } => "BadReduction",
            Error::InvalidDegree { .. } => "InvalidDegree",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::LevelMismatch(_) => "LevelMismatch",
            Error::NotFound(_) => "NotFound",
            Error::PreconditionFailed(_) => "PreconditionFailed",
            Error::NotInFamily(_) => "NotInFamily",
            Error::SingularMember(_) => "SingularMember",
            Error::CertificateFailure(_) => "CertificateFailure",
            Error::NetworkUnavailable(_) => "NetworkUnavailable",
            Error::Mismatch(_) => "Mismatch",
            Error::Parse(_) => "Parse",
            Error::Internal(_) => "Internal",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
