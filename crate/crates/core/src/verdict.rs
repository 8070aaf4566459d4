use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::rational::PIntegerRational;
use crate::residue::{valuation_of_difference, PrimePowerModulus, Residue, Valuation};
use crate::word::Word;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skip => "skip",
        }
    }
}

/// Outcome of checking one congruence at one prime (and one alpha, where
/// the congruence has a parameter).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub case: String,
    pub p: u64,
    pub alpha: Option<PIntegerRational>,
    /// The exponent `m` of the claimed modulus `p^m`.
    pub exponent: u32,
    /// Both sides reduced modulo `p^m`; absent for skipped cases.
    pub lhs: Option<BigUint>,
    pub rhs: Option<BigUint>,
    pub status: Status,
    /// `p`-adic agreement of the two sides, measured at the precision they
    /// were evaluated at (which may exceed `exponent`).
    pub valuation: Option<Valuation>,
    pub reason: Option<String>,
}

impl Verdict {
    /// Compare two sides evaluated in the same ring, whose exponent may be
    /// larger than the claimed `exponent`.
    pub fn compare<W: Word>(
        case: impl Into<String>,
        p: u64,
        alpha: Option<PIntegerRational>,
        exponent: u32,
        lhs: &Residue<W>,
        rhs: &Residue<W>,
    ) -> Self {
        let valuation = valuation_of_difference(lhs, rhs).expect("both sides share a ring");
        let claimed = PrimePowerModulus::<BigUint>::new(p, exponent).expect("valid modulus");
        let project = |r: &Residue<W>| r.to_biguint() % claimed.modulus_big();
        let status = if valuation.meets(exponent) {
            Status::Pass
        } else {
            Status::Fail
        };
        Verdict {
            case: case.into(),
            p,
            alpha,
            exponent,
            lhs: Some(project(lhs)),
            rhs: Some(project(rhs)),
            status,
            valuation: Some(valuation),
            reason: None,
        }
    }

    pub fn skip(
        case: impl Into<String>,
        p: u64,
        alpha: Option<PIntegerRational>,
        exponent: u32,
        reason: impl Into<String>,
    ) -> Self {
        Verdict {
            case: case.into(),
            p,
            alpha,
            exponent,
            lhs: None,
            rhs: None,
            status: Status::Skip,
            valuation: None,
            reason: Some(reason.into()),
        }
    }

    /// Mark a verdict failed with an explanation, keeping its residues.
    pub fn fail_with(mut self, reason: impl Into<String>) -> Self {
        self.status = Status::Fail;
        self.reason = Some(reason.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// The difference vanishes to a higher power of `p` than claimed.
    pub fn is_strengthened(&self) -> bool {
        self.status == Status::Pass
            && self.valuation.is_some_and(|v| v.floor() > self.exponent)
            && !self.alpha.as_ref().is_some_and(|a| a.is_degenerate())
    }
}
