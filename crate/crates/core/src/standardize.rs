//! Attainable bounds of each measure and rescaling into `[0, 1]`.
//!
//! Every bound depends on the marginals `P(A)`, `P(B)` and on the mining
//! thresholds, so the thresholds are always passed in explicitly. A raw
//! value `r` with bounds `[lower, upper]` standardizes to
//! `(r - lower) / (upper - lower)`.

use serde::{Deserialize, Serialize};

use crate::apriori::Thresholds;
use crate::error::{Error, Result};
use crate::measures::{Measure, SupportTriple};

/// Windows at most this wide are treated as a single attainable value.
pub const DEGENERATE_WIDTH: f64 = 1e-12;

/// Containment slack, relative to the window width.
pub const CONTAINMENT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub lower: f64,
    pub upper: f64,
    pub degenerate: bool,
}

impl Bounds {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if !(lower.is_finite() && upper.is_finite()) {
            return Err(Error::UndefinedBound);
        }
        if lower > upper + DEGENERATE_WIDTH {
            return Err(Error::InvertedBounds { lower, upper });
        }
        Ok(Self {
            lower,
            upper,
            degenerate: upper - lower <= DEGENERATE_WIDTH,
        })
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StandardizedScore {
    pub raw: f64,
    pub bounds: Bounds,
    pub value: f64,
    pub degenerate: bool,
}

fn check_marginals(p_a: f64, p_b: f64, open_top: bool) -> Result<()> {
    let ok = |p: f64| p.is_finite() && p > 0.0 && if open_top { p < 1.0 } else { p <= 1.0 };
    if ok(p_a) && ok(p_b) {
        Ok(())
    } else {
        let range = if open_top { "(0, 1)" } else { "(0, 1]" };
        Err(Error::Domain(format!(
            "marginals must lie in {range}, got P(A)={p_a}, P(B)={p_b}"
        )))
    }
}

fn max_of(terms: &[f64]) -> f64 {
    terms.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// Lift: upper `1/max(P(A),P(B))`; lower is the largest of
/// `(P(A)+P(B)-1)/(P(A)P(B))`, `4 sigma/(1+sigma)^2`, `sigma/(P(A)P(B))`
/// and `kappa/P(B)`.
pub fn lift_bounds(p_a: f64, p_b: f64, th: &Thresholds) -> Result<Bounds> {
    check_marginals(p_a, p_b, false)?;
    let (s, k) = (th.sigma, th.kappa);
    let ab = p_a * p_b;
    let upper = 1.0 / p_a.max(p_b);
    let lower = max_of(&[
        (p_a + p_b - 1.0) / ab,
        4.0 * s / ((1.0 + s) * (1.0 + s)),
        s / ab,
        k / p_b,
    ]);
    Bounds::new(lower, upper)
}

/// Cosine: upper `sqrt(min/max)` of the marginals; lower is the largest of
/// five terms in the support and confidence thresholds.
pub fn cosine_bounds(p_a: f64, p_b: f64, th: &Thresholds) -> Result<Bounds> {
    check_marginals(p_a, p_b, false)?;
    let (s, k) = (th.sigma, th.kappa);
    let root = (p_a * p_b).sqrt();
    let upper = (p_a / p_b).sqrt().min((p_b / p_a).sqrt());
    let lower = max_of(&[
        2.0 * s / (1.0 + s),
        s / root,
        (p_a + p_b - 1.0) / root,
        (k * s / p_b).sqrt(),
        k * (p_a / p_b).sqrt(),
    ]);
    Bounds::new(lower, upper)
}

/// Yule's Q: upper is always 1. Q increases with `P(A,B)` across the
/// Fréchet interval and is -1 at its lower end, so the lower bound is Q at
/// the smallest joint support the thresholds allow, `P(A,B) = sigma` or
/// `P(A,B) = kappa P(A)`, and never below -1. A threshold term below the
/// Fréchet lower bound is dominated by it and skipped; the simplified form
/// has a pole there.
pub fn yule_q_bounds(p_a: f64, p_b: f64, th: &Thresholds) -> Result<Bounds> {
    check_marginals(p_a, p_b, true)?;
    let (s, k) = (th.sigma, th.kappa);
    let ab = p_a * p_b;
    let frechet_lo = (p_a + p_b - 1.0).max(0.0);

    let mut lower = -1.0f64;
    if s >= frechet_lo {
        let den = s + ab - 2.0 * s * (p_a + p_b - s);
        if den == 0.0 {
            return Err(Error::UndefinedBound);
        }
        lower = lower.max((s - ab) / den);
    }
    if k * p_a >= frechet_lo {
        let den = k + p_b - 2.0 * k * (p_a + p_b - k * p_a);
        if den == 0.0 {
            return Err(Error::UndefinedBound);
        }
        lower = lower.max((k - p_b) / den);
    }
    Bounds::new(lower, 1.0)
}

/// Gini index bounds. The branch follows the sign of `P(A,B) - P(A)P(B)`
/// with equality taken as positive. With `l = max(sigma, kappa P(A),
/// P(A)+P(B)-1)` and `g(x) = 2 (x - P(A)P(B))^2 / (P(A)(1-P(A)))`:
///
/// * positive: `[g(max(l, P(A)P(B))), g(min(P(A), P(B)))]`
/// * negative: `[0, g(l)]`
pub fn gini_bounds(p_a: f64, p_b: f64, p_ab: f64, th: &Thresholds) -> Result<Bounds> {
    if !(p_a > 0.0 && p_a < 1.0) {
        return Err(Error::Domain(format!(
            "Gini bounds need 0 < P(A) < 1, got {p_a}"
        )));
    }
    SupportTriple::new(p_a, p_b, p_ab)?;
    let ab = p_a * p_b;
    let scale = p_a * (1.0 - p_a);
    let g = |x: f64| 2.0 * (x - ab) * (x - ab) / scale;
    let l = max_of(&[th.sigma, th.kappa * p_a, p_a + p_b - 1.0]);

    if p_ab >= ab {
        Bounds::new(g(l.max(ab)), g(p_a.min(p_b)))
    } else {
        Bounds::new(0.0, g(l))
    }
}

/// Rescales `raw` into `[0, 1]` within `b`.
///
/// A degenerate window yields `1.0` with the flag set. Otherwise `raw` may
/// stray outside the window by [`CONTAINMENT_TOL`] times its width (plus a
/// few ulps of the operands) before this reports a bounds violation.
pub fn standardize(raw: f64, b: &Bounds) -> Result<StandardizedScore> {
    if !raw.is_finite() {
        return Err(Error::InvalidValue(format!(
            "raw value {raw} is not finite"
        )));
    }
    if b.degenerate {
        return Ok(StandardizedScore {
            raw,
            bounds: *b,
            value: 1.0,
            degenerate: true,
        });
    }
    let width = b.width();
    let scale = raw.abs().max(b.lower.abs()).max(b.upper.abs());
    let tol = CONTAINMENT_TOL * width + 16.0 * f64::EPSILON * scale;
    if raw < b.lower - tol || raw > b.upper + tol {
        return Err(Error::BoundsViolation {
            raw,
            lower: b.lower,
            upper: b.upper,
        });
    }
    Ok(StandardizedScore {
        raw,
        bounds: *b,
        value: ((raw - b.lower) / width).clamp(0.0, 1.0),
        degenerate: false,
    })
}

pub fn bounds_for(measure: Measure, t: &SupportTriple, th: &Thresholds) -> Result<Bounds> {
    match measure {
        Measure::Lift => lift_bounds(t.p_a(), t.p_b(), th),
        Measure::Cosine => cosine_bounds(t.p_a(), t.p_b(), th),
        Measure::YuleQ => yule_q_bounds(t.p_a(), t.p_b(), th),
        Measure::Gini => gini_bounds(t.p_a(), t.p_b(), t.p_ab(), th),
    }
}

/// Raw value, bounds and standardized value of one measure.
pub fn score(measure: Measure, t: &SupportTriple, th: &Thresholds) -> Result<StandardizedScore> {
    let raw = measure.raw(t)?;
    let b = bounds_for(measure, t, th)?;
    standardize(raw, &b)
}

/// All four measures for one rule. A measure that is undefined for the
/// rule, or whose raw value escapes its bounds, carries the error text.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureReport {
    pub triple: SupportTriple,
    pub thresholds: Thresholds,
    scores: [std::result::Result<StandardizedScore, String>; 4],
}

impl MeasureReport {
    pub fn new(t: &SupportTriple, th: &Thresholds) -> Self {
        Self {
            triple: *t,
            thresholds: *th,
            scores: Measure::ALL.map(|m| score(m, t, th).map_err(|e| e.to_string())),
        }
    }

    pub fn get(&self, m: Measure) -> std::result::Result<&StandardizedScore, &str> {
        self.scores[m as usize].as_ref().map_err(String::as_str)
    }

    pub fn iter(
        &self,
    ) -> impl Iterator<Item = (Measure, std::result::Result<&StandardizedScore, &str>)> {
        Measure::ALL.into_iter().map(move |m| (m, self.get(m)))
    }

    pub fn is_complete(&self) -> bool {
        self.scores.iter().all(|s| s.is_ok())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub x: f64,
    pub upper: f64,
    pub lower: f64,
}

/// Lift bound curves for `P(A) = P(B) = x`: `upper = 1/x` and
/// `lower = max(0, 2x - 1)`.
pub fn lift_bound_curve(grid: &[f64]) -> Result<Vec<CurvePoint>> {
    grid.iter()
        .map(|&x| {
            if !(x > 0.0 && x <= 1.0) {
                return Err(Error::Domain(format!("curve point {x} outside (0, 1]")));
            }
            Ok(CurvePoint {
                x,
                upper: 1.0 / x,
                lower: (2.0 * x - 1.0).max(0.0),
            })
        })
        .collect()
}
