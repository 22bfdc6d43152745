//! Level raising for weight-2 newforms attached to rational elliptic curves.
//!
//! Given an elliptic curve E/Q and a "favorite" prime p of good reduction, the
//! congruence a_p(E) = eps (p + 1) mod lambda (for a prime lambda over ell and a
//! sign eps) is, by Ribet's level-raising theorem, exactly the local condition
//! under which the mod-ell representation of E also arises from a newform of
//! level N*p.  Everything here is organized around that statement:
//!
//! * [`ec_arith`] computes a_p and the 2-division data of a curve,
//! * [`coeff_arith`] turns the norm condition ell | Nm(p + 1 -+ a_p) into a list
//!   of candidate congruence characteristics (ell, eps),
//! * [`modsym`] builds weight-2 modular symbols for Gamma_0(M) and searches the
//!   mod-ell new subspace for an eigensystem witnessing the raised level,
//! * [`levelraise`] glues those into plan / verify / hypothesis-check pipelines,
//! * [`family`] handles the explicit family E_k : y^2 = x^3 - 3kx + 2k with
//!   k = -11 (mod 1427), whose members satisfy the irreducibility hypotheses for
//!   every ell in Mazur's torsion-and-isogeny set,
//! * [`lmfdb`] cross-checks curve data against recorded LMFDB fixtures.
//!
//! All arithmetic that feeds a certificate is exact: big integers, big
//! rationals, Sturm sequences, and fraction-free elimination.  Floating point
//! appears nowhere in a decision.

pub mod arith;
pub mod coeff_arith;
pub mod ec_arith;
pub mod error;
pub mod family;
pub mod levelraise;
pub mod linalg;
pub mod lmfdb;
pub mod modsym;
pub mod polyz;

pub use error::{Error, Result};
