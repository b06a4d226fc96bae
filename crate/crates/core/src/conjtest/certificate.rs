use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use crate::error::Result;
use crate::exact::{IntMatrix, RatMatrix};
use crate::matgroup::{GroupMatrix, MatrixGroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Conjugate,
    NotConjugate,
    /// The search gave up at this bound without a proof either way.
    Unknown(u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Integral(IntMatrix),
    Rational(RatMatrix),
    /// Name of a distinguishing invariant, or a description of the exhausted
    /// search.
    Invariant(String),
}

/// Outcome of a conjugacy test. A matrix witness `U` satisfies
/// `U G1 U^-1 = G2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyCertificate {
    pub verdict: Verdict,
    pub witness: Witness,
}

impl ConjugacyCertificate {
    pub fn conjugate_z(u: IntMatrix) -> Self {
        ConjugacyCertificate { verdict: Verdict::Conjugate, witness: Witness::Integral(u) }
    }

    pub fn conjugate_q(u: RatMatrix) -> Self {
        ConjugacyCertificate { verdict: Verdict::Conjugate, witness: Witness::Rational(u) }
    }

    pub fn not_conjugate(invariant: impl Into<String>) -> Self {
        ConjugacyCertificate { verdict: Verdict::NotConjugate, witness: Witness::Invariant(invariant.into()) }
    }

    pub fn unknown(bound: u32) -> Self {
        ConjugacyCertificate {
            verdict: Verdict::Unknown(bound),
            witness: Witness::Invariant(format!("search exhausted at height {bound}")),
        }
    }

    pub fn is_conjugate(&self) -> bool {
        self.verdict == Verdict::Conjugate
    }

    pub fn is_not_conjugate(&self) -> bool {
        self.verdict == Verdict::NotConjugate
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self.verdict, Verdict::Unknown(_))
    }

    /// The conjugating matrix over Q, if any.
    pub fn witness_matrix(&self) -> Option<RatMatrix> {
        match &self.witness {
            Witness::Integral(u) => Some(u.to_rat()),
            Witness::Rational(u) => Some(u.clone()),
            Witness::Invariant(_) => None,
        }
    }

    /// The invariant name for `NotConjugate`.
    pub fn invariant(&self) -> Option<&str> {
        match &self.witness {
            Witness::Invariant(s) => Some(s),
            _ => None,
        }
    }

    /// Checks a matrix witness by transporting the generators of `g1` into
    /// `g2` and comparing orders. Non-matrix witnesses verify as `false`.
    pub fn verify<M: GroupMatrix>(&self, g1: &MatrixGroup<M>, g2: &MatrixGroup<M>) -> Result<bool> {
        let Some(u) = self.witness_matrix() else {
            return Ok(false);
        };
        if let Witness::Integral(ui) = &self.witness {
            if !ui.is_unimodular() {
                return Ok(false);
            }
        }
        let Ok(u_inv) = u.inverse() else {
            return Ok(false);
        };
        if g1.order()? != g2.order()? {
            return Ok(false);
        }
        let targets: std::collections::HashSet<RatMatrix> = g2.elements()?.iter().map(|x| x.to_rat()).collect();
        Ok(g1.generators().iter().all(|g| targets.contains(&(&(&u * &g.to_rat()) * &u_inv))))
    }
}

impl Serialize for ConjugacyCertificate {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let verdict = match self.verdict {
            Verdict::Conjugate => "conjugate",
            Verdict::NotConjugate => "not_conjugate",
            Verdict::Unknown(_) => "unknown",
        };
        let mut v = json!({ "verdict": verdict });
        match &self.witness {
            Witness::Integral(u) => {
                v["witness"] = serde_json::to_value(u).map_err(serde::ser::Error::custom)?;
                v["ring"] = json!("Z");
            }
            Witness::Rational(u) => {
                v["witness"] = serde_json::to_value(u).map_err(serde::ser::Error::custom)?;
                v["ring"] = json!("Q");
            }
            Witness::Invariant(name) => v["witness"] = json!(name),
        }
        if let Verdict::Unknown(b) = self.verdict {
            v["bound"] = json!(b);
        }
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ConjugacyCertificate {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        let witness_value = v.get("witness").cloned().ok_or_else(|| D::Error::missing_field("witness"))?;
        let witness = match witness_value {
            Value::String(s) => Witness::Invariant(s),
            other => match v.get("ring").and_then(Value::as_str) {
                Some("Q") => Witness::Rational(serde_json::from_value(other).map_err(D::Error::custom)?),
                _ => Witness::Integral(serde_json::from_value(other).map_err(D::Error::custom)?),
            },
        };
        let verdict = match v.get("verdict").and_then(Value::as_str) {
            Some("conjugate") => Verdict::Conjugate,
            Some("not_conjugate") => Verdict::NotConjugate,
            Some("unknown") => {
                Verdict::Unknown(v.get("bound").and_then(Value::as_u64).unwrap_or(0).try_into().map_err(D::Error::custom)?)
            }
            other => return Err(D::Error::custom(format!("unknown verdict {other:?}"))),
        };
        Ok(ConjugacyCertificate { verdict, witness })
    }
}
