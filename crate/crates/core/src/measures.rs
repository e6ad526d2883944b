//! Raw interestingness measures evaluated on a rule's support triple.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack allowed on the Fréchet inequalities when validating a triple.
const FRECHET_TOL: f64 = 1e-12;

/// Supports `P(A)`, `P(B)` and the joint `P(A,B)` of a rule `A => B`.
///
/// Construction checks `0 < P(A), P(B) <= 1` and
/// `max(0, P(A)+P(B)-1) <= P(A,B) <= min(P(A), P(B))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupportTriple {
    p_a: f64,
    p_b: f64,
    p_ab: f64,
}

impl SupportTriple {
    pub fn new(p_a: f64, p_b: f64, p_ab: f64) -> Result<Self> {
        if ![p_a, p_b, p_ab].iter().all(|p| p.is_finite()) {
            return Err(Error::Domain("supports must be finite".into()));
        }
        if !(p_a > 0.0 && p_a <= 1.0 && p_b > 0.0 && p_b <= 1.0) {
            return Err(Error::Domain(format!(
                "marginal supports must lie in (0, 1], got P(A)={p_a}, P(B)={p_b}"
            )));
        }
        let lo = (p_a + p_b - 1.0).max(0.0);
        let hi = p_a.min(p_b);
        if p_ab < lo - FRECHET_TOL || p_ab > hi + FRECHET_TOL {
            return Err(Error::Domain(format!(
                "P(A,B)={p_ab} outside Fréchet bounds [{lo}, {hi}]"
            )));
        }
        Ok(Self { p_a, p_b, p_ab })
    }

    pub fn p_a(&self) -> f64 {
        self.p_a
    }

    pub fn p_b(&self) -> f64 {
        self.p_b
    }

    pub fn p_ab(&self) -> f64 {
        self.p_ab
    }

    /// The triple of the reversed rule `B => A`.
    pub fn swapped(&self) -> Self {
        Self {
            p_a: self.p_b,
            p_b: self.p_a,
            p_ab: self.p_ab,
        }
    }

    /// `P(A, not B)`
    pub fn p_a_not_b(&self) -> f64 {
        self.p_a - self.p_ab
    }

    /// `P(not A, B)`
    pub fn p_not_a_b(&self) -> f64 {
        self.p_b - self.p_ab
    }

    /// `P(not A, not B)`
    pub fn p_not_a_not_b(&self) -> f64 {
        1.0 - self.p_a - self.p_b + self.p_ab
    }
}

/// `P(B|A) = P(A,B) / P(A)`
pub fn confidence(t: &SupportTriple) -> f64 {
    t.p_ab / t.p_a
}

/// `P(A,B) / (P(A) P(B))`, equal to 1 at independence.
pub fn lift(t: &SupportTriple) -> f64 {
    t.p_ab / (t.p_a * t.p_b)
}

/// `P(A,B) / sqrt(P(A) P(B))`
pub fn cosine(t: &SupportTriple) -> f64 {
    t.p_ab / (t.p_a * t.p_b).sqrt()
}

/// Yule's Q through the single-difference form
/// `(P(A,B) - P(A)P(B)) / (P(A,B) + P(A)P(B) - 2 P(A,B) (P(A) + P(B) - P(A,B)))`,
/// which avoids subtracting the two cross products of the 2x2 table.
pub fn yule_q(t: &SupportTriple) -> Result<f64> {
    if t.p_a >= 1.0 || t.p_b >= 1.0 {
        return Err(Error::Domain("Yule's Q needs P(A) < 1 and P(B) < 1".into()));
    }
    // the maximum is exact: rounding in the denominator can miss it
    if t.p_ab == t.p_a.min(t.p_b) {
        return Ok(1.0);
    }
    let indep = t.p_a * t.p_b;
    let den = t.p_ab + indep - 2.0 * t.p_ab * (t.p_a + t.p_b - t.p_ab);
    if den == 0.0 {
        return Err(Error::UndefinedOdds);
    }
    Ok(((t.p_ab - indep) / den).clamp(-1.0, 1.0))
}

/// Gini index as `2 (P(A,B) - P(A)P(B))^2 / (P(A)(1 - P(A)))`.
pub fn gini(t: &SupportTriple) -> Result<f64> {
    if t.p_a >= 1.0 {
        return Err(Error::Domain("Gini index needs P(A) < 1".into()));
    }
    let diff = t.p_ab - t.p_a * t.p_b;
    Ok(2.0 * diff * diff / (t.p_a * (1.0 - t.p_a)))
}

/// The four measures that carry a standardized counterpart.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Lift,
    Cosine,
    YuleQ,
    Gini,
}

impl Measure {
    pub const ALL: [Measure; 4] = [
        Measure::Lift,
        Measure::Cosine,
        Measure::YuleQ,
        Measure::Gini,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Lift => "lift",
            Measure::Cosine => "cosine",
            Measure::YuleQ => "yule_q",
            Measure::Gini => "gini",
        }
    }

    pub fn raw(self, t: &SupportTriple) -> Result<f64> {
        match self {
            Measure::Lift => Ok(lift(t)),
            Measure::Cosine => Ok(cosine(t)),
            Measure::YuleQ => yule_q(t),
            Measure::Gini => gini(t),
        }
    }
}

impl std::fmt::Display for Measure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}
