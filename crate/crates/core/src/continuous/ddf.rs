//! Distance distribution functions with finitely many jumps.
//!
//! A [`StepDdf`] is stored as its jumps `(b₀, v₀), …, (bₘ, vₘ)` with the
//! breakpoints strictly increasing and the values strictly increasing in
//! `(0, 1]`. It denotes
//!
//! ```text
//! f(t) = max { vₖ : bₖ < t }      (0 when no breakpoint lies below t)
//! ```
//!
//! so `f` is constant on each `(bₖ, bₖ₊₁]`, `f(0) = 0`, and `f(∞)` is the
//! last value. Left-continuity holds by construction and two functions are
//! equal exactly when their step lists are.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::TNorm;
use crate::numeric::{fmt_rational, in_unit_interval, int, parse_rational, Ext, ParseNumberError, Rational};
use crate::quantale::Quantale;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DdfError {
    #[error("breakpoint {0} is negative")]
    NegativeBreakpoint(String),
    #[error("breakpoints must be finite; use value_at_infinity for f(inf)")]
    InfiniteBreakpoint,
    #[error("breakpoints not strictly increasing: {prev} then {next}")]
    NotIncreasing { prev: String, next: String },
    #[error("value {0} lies outside [0, 1]")]
    ValueOutOfRange(String),
    #[error("values decrease after breakpoint {at}: a distribution function is isotone")]
    Decreasing { at: String },
    #[error("value_at_infinity is {given} but the supremum of the finite values is {expected}")]
    InfinityMismatch { given: String, expected: String },
    #[error(transparent)]
    Number(#[from] ParseNumberError),
    #[error("malformed DDF JSON: {0}")]
    Json(String),
}

/// What to do with an explicit `value_at_infinity` that disagrees with the
/// supremum of the finite values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InfinityRule {
    /// Reject the file.
    Strict,
    /// Replace it by the supremum, as the exponential mate of a fuzzy
    /// metric does.
    Mate,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StepDdf {
    steps: Vec<(Rational, Rational)>,
}

impl StepDdf {
    /// The constant zero function, bottom of Δ₊.
    pub fn zero() -> Self {
        StepDdf { steps: Vec::new() }
    }

    /// `f_{0,1}`: 0 at 0 and 1 everywhere else. Unit and top of Δ₊.
    pub fn unit() -> Self {
        StepDdf {
            steps: vec![(Rational::zero(), Rational::one())],
        }
    }

    /// Jumps from 0 to `height` just after `at`.
    pub fn jump(at: Rational, height: Rational) -> Self {
        assert!(!at.is_negative() && in_unit_interval(&height));
        if height.is_zero() {
            return StepDdf::zero();
        }
        StepDdf {
            steps: vec![(at, height)],
        }
    }

    /// Jumps from 0 to 1 just after `at`.
    pub fn threshold(at: Rational) -> Self {
        StepDdf::jump(at, Rational::one())
    }

    /// The value `height` everywhere except at 0.
    pub fn constant(height: Rational) -> Self {
        StepDdf::jump(Rational::zero(), height)
    }

    /// Validates a list of `(breakpoint, value)` pairs. Values must be
    /// nondecreasing; repeated values and zero values are dropped.
    pub fn from_steps(steps: Vec<(Rational, Rational)>) -> Result<Self, DdfError> {
        for (i, (b, v)) in steps.iter().enumerate() {
            if b.is_negative() {
                return Err(DdfError::NegativeBreakpoint(fmt_rational(b)));
            }
            if !in_unit_interval(v) {
                return Err(DdfError::ValueOutOfRange(fmt_rational(v)));
            }
            if i > 0 {
                let (pb, pv) = &steps[i - 1];
                if pb >= b {
                    return Err(DdfError::NotIncreasing {
                        prev: fmt_rational(pb),
                        next: fmt_rational(b),
                    });
                }
                if pv > v {
                    return Err(DdfError::Decreasing {
                        at: fmt_rational(b),
                    });
                }
            }
        }
        Ok(StepDdf::from_points(steps))
    }

    /// The least DDF lying above every jump `(b, v)` in `points`, i.e.
    /// `t ↦ max { v : b < t }`. Points may come in any order.
    pub(crate) fn from_points(mut points: Vec<(Rational, Rational)>) -> Self {
        points.sort_by(|(b1, v1), (b2, v2)| b1.cmp(b2).then_with(|| v2.cmp(v1)));
        let mut steps: Vec<(Rational, Rational)> = Vec::new();
        for (b, v) in points {
            let above = match steps.last() {
                Some((_, last)) => v > *last,
                None => v > Rational::zero(),
            };
            if above {
                steps.push((b, v));
            }
        }
        StepDdf { steps }
    }

    pub fn steps(&self) -> &[(Rational, Rational)] {
        &self.steps
    }

    pub fn breakpoints(&self) -> impl Iterator<Item = &Rational> {
        self.steps.iter().map(|(b, _)| b)
    }

    pub fn is_zero(&self) -> bool {
        self.steps.is_empty()
    }

    /// `f(∞)`, the supremum of all finite values.
    pub fn value_at_infinity(&self) -> Rational {
        self.steps
            .last()
            .map(|(_, v)| v.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, t: &Ext) -> Rational {
        match t {
            Ext::Inf => self.value_at_infinity(),
            Ext::Fin(t) => self.eval_at(t),
        }
    }

    pub fn eval_at(&self, t: &Rational) -> Rational {
        let k = self.steps.partition_point(|(b, _)| b < t);
        if k == 0 {
            Rational::zero()
        } else {
            self.steps[k - 1].1.clone()
        }
    }

    /// The value just to the right of `t`, `lim_{s↓t} f(s) = max { v : b ≤ t }`.
    pub fn eval_right(&self, t: &Rational) -> Rational {
        let k = self.steps.partition_point(|(b, _)| b <= t);
        if k == 0 {
            Rational::zero()
        } else {
            self.steps[k - 1].1.clone()
        }
    }

    /// `(f ⊛ g)(t) = ⋁_{r+s≤t} f(r) ∗ g(s)`. For step functions the supremum
    /// is attained on pairs of jumps with `aₖ + bₗ < t`.
    pub fn convolve(&self, other: &StepDdf, tnorm: TNorm) -> StepDdf {
        let mut points = Vec::with_capacity(self.steps.len() * other.steps.len());
        for (a, v) in &self.steps {
            for (b, w) in &other.steps {
                points.push((a + b, tnorm.eval(v, w)));
            }
        }
        StepDdf::from_points(points)
    }

    /// Pointwise order.
    pub fn leq(&self, other: &StepDdf) -> bool {
        self.leq_witness(other).is_none()
    }

    /// A point `t` with `self(t) > other(t)`, if any.
    pub fn leq_witness(&self, other: &StepDdf) -> Option<Rational> {
        for (b, v) in &self.steps {
            if *v > other.eval_right(b) {
                let next = self
                    .breakpoints()
                    .chain(other.breakpoints())
                    .filter(|c| *c > b)
                    .min()
                    .cloned()
                    .unwrap_or_else(|| b + int(2));
                return Some((b + next) / int(2));
            }
        }
        None
    }

    /// Pointwise maximum.
    pub fn join(&self, other: &StepDdf) -> StepDdf {
        StepDdf::sup([self, other])
    }

    pub fn sup<'a, I: IntoIterator<Item = &'a StepDdf>>(fs: I) -> StepDdf {
        StepDdf::from_points(fs.into_iter().flat_map(|f| f.steps.iter().cloned()).collect())
    }

    pub fn from_json_str(text: &str, rule: InfinityRule) -> Result<Self, DdfError> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| DdfError::Json(e.to_string()))?;
        StepDdf::from_json_value(&value, rule)
    }

    /// Accepts either a bare array of `{"breakpoint", "value"}` entries or
    /// an object `{"steps": [...], "value_at_infinity": "..."}`.
    pub fn from_json_value(value: &serde_json::Value, rule: InfinityRule) -> Result<Self, DdfError> {
        let doc: DdfDocument =
            serde_json::from_value(value.clone()).map_err(|e| DdfError::Json(e.to_string()))?;
        let (steps, at_inf) = match doc {
            DdfDocument::Bare(steps) => (steps, None),
            DdfDocument::Object {
                steps,
                value_at_infinity,
            } => (steps, value_at_infinity),
        };
        let mut parsed = Vec::with_capacity(steps.len());
        for s in steps {
            let b = s.breakpoint.as_str();
            if matches!(b.trim(), "inf" | "Inf" | "INF" | "∞" | "infinity") {
                return Err(DdfError::InfiniteBreakpoint);
            }
            parsed.push((parse_rational(b)?, parse_rational(&s.value)?));
        }
        let f = StepDdf::from_steps(parsed)?;
        if let (Some(given), InfinityRule::Strict) = (at_inf, rule) {
            let given = parse_rational(&given)?;
            if !in_unit_interval(&given) {
                return Err(DdfError::ValueOutOfRange(fmt_rational(&given)));
            }
            if given != f.value_at_infinity() {
                return Err(DdfError::InfinityMismatch {
                    given: fmt_rational(&given),
                    expected: fmt_rational(&f.value_at_infinity()),
                });
            }
        }
        Ok(f)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let doc = DdfDocumentOut {
            steps: self
                .steps
                .iter()
                .map(|(b, v)| StepEntry {
                    breakpoint: fmt_rational(b),
                    value: fmt_rational(v),
                })
                .collect(),
            value_at_infinity: fmt_rational(&self.value_at_infinity()),
        };
        serde_json::to_value(doc).expect("DDF serializes")
    }

    /// Canonical pretty-printed JSON with a trailing newline.
    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json_value()).expect("DDF serializes");
        s.push('\n');
        s
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StepEntry {
    breakpoint: String,
    value: String,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum DdfDocument {
    Bare(Vec<StepEntry>),
    Object {
        steps: Vec<StepEntry>,
        value_at_infinity: Option<String>,
    },
}

#[derive(Serialize)]
struct DdfDocumentOut {
    steps: Vec<StepEntry>,
    value_at_infinity: String,
}

impl fmt::Display for StepDdf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ddf[")?;
        for (i, (b, v)) in self.steps.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}:{}", fmt_rational(b), fmt_rational(v))?;
        }
        f.write_str("]")
    }
}

/// `Δ₊(∗)`: step DDFs under the pointwise order and `⊛`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DdfQuantale {
    pub tnorm: TNorm,
}

impl DdfQuantale {
    pub fn new(tnorm: TNorm) -> Self {
        DdfQuantale { tnorm }
    }
}

impl Quantale for DdfQuantale {
    type Elem = StepDdf;

    fn leq(&self, a: &StepDdf, b: &StepDdf) -> bool {
        a.leq(b)
    }

    fn tensor(&self, a: &StepDdf, b: &StepDdf) -> StepDdf {
        a.convolve(b, self.tnorm)
    }

    fn unit(&self) -> StepDdf {
        StepDdf::unit()
    }

    fn bottom(&self) -> StepDdf {
        StepDdf::zero()
    }

    fn join(&self, a: &StepDdf, b: &StepDdf) -> StepDdf {
        a.join(b)
    }

    fn label(&self, a: &StepDdf) -> String {
        a.to_string()
    }

    fn explain_not_leq(&self, a: &StepDdf, b: &StepDdf) -> Option<String> {
        let t = a.leq_witness(b)?;
        Some(format!(
            "at t = {}: {} > {}",
            fmt_rational(&t),
            fmt_rational(&a.eval_at(&t)),
            fmt_rational(&b.eval_at(&t))
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::ratio;

    fn ddf(steps: &[(i64, i64, i64, i64)]) -> StepDdf {
        StepDdf::from_steps(
            steps
                .iter()
                .map(|&(bn, bd, vn, vd)| (ratio(bn, bd), ratio(vn, vd)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn unit_is_zero_at_zero_and_one_elsewhere() {
        let u = StepDdf::unit();
        assert_eq!(u.eval(&Ext::zero()), Rational::zero());
        assert_eq!(u.eval(&Ext::from_ratio(1, 1000)), Rational::one());
        assert_eq!(u.eval(&Ext::Inf), Rational::one());
    }

    #[test]
    fn evaluation_is_left_continuous_at_jumps() {
        let f = ddf(&[(2, 1, 3, 4)]);
        assert_eq!(f.eval(&Ext::from_int(2)), Rational::zero());
        assert_eq!(f.eval(&Ext::from_ratio(2001, 1000)), ratio(3, 4));
        assert_eq!(f.eval_right(&int(2)), ratio(3, 4));
    }

    #[test]
    fn thresholds_add_under_convolution() {
        for t in TNorm::ALL {
            let f = StepDdf::threshold(ratio(1, 2)).convolve(&StepDdf::threshold(ratio(1, 3)), t);
            assert_eq!(f, StepDdf::threshold(ratio(5, 6)));
        }
    }

    #[test]
    fn product_convolution_of_half_jumps() {
        let f = ddf(&[(1, 1, 1, 2)]);
        let h = f.convolve(&f, TNorm::Product);
        assert_eq!(h.eval_at(&int(2)), Rational::zero());
        assert_eq!(h.eval_at(&ratio(201, 100)), ratio(1, 4));
        assert_eq!(h, ddf(&[(2, 1, 1, 4)]));
    }

    #[test]
    fn canonicalization_merges_equal_values() {
        let f = ddf(&[(0, 1, 0, 1), (1, 1, 1, 2), (2, 1, 1, 2), (3, 1, 1, 1)]);
        assert_eq!(f.steps().len(), 2);
        assert_eq!(f, ddf(&[(1, 1, 1, 2), (3, 1, 1, 1)]));
    }

    #[test]
    fn construction_errors() {
        let bad = |v: Vec<(Rational, Rational)>| StepDdf::from_steps(v).unwrap_err();
        assert!(matches!(
            bad(vec![(int(1), ratio(1, 2)), (int(1), int(1))]),
            DdfError::NotIncreasing { .. }
        ));
        assert!(matches!(
            bad(vec![(int(1), ratio(1, 2)), (int(2), ratio(1, 4))]),
            DdfError::Decreasing { .. }
        ));
        assert!(matches!(bad(vec![(int(1), int(2))]), DdfError::ValueOutOfRange(_)));
        assert!(matches!(bad(vec![(int(-1), int(1))]), DdfError::NegativeBreakpoint(_)));
    }

    #[test]
    fn order_and_witness() {
        let f = ddf(&[(1, 1, 1, 2), (3, 1, 1, 1)]);
        let g = ddf(&[(2, 1, 1, 1)]);
        assert!(!f.leq(&g));
        let t = f.leq_witness(&g).unwrap();
        assert!(f.eval_at(&t) > g.eval_at(&t));
        assert!(f.leq(&StepDdf::unit()));
        assert!(StepDdf::zero().leq(&f));
        let s = f.join(&g);
        assert_eq!(s, ddf(&[(1, 1, 1, 2), (2, 1, 1, 1)]));
    }

    #[test]
    fn json_round_trip_and_forms() {
        let f = ddf(&[(1, 2, 1, 3), (2, 1, 1, 1)]);
        let text = f.to_json_string();
        assert_eq!(StepDdf::from_json_str(&text, InfinityRule::Strict).unwrap(), f);
        let bare = r#"[{"breakpoint": "1/2", "value": "1/3"}, {"breakpoint": "2", "value": "1"}]"#;
        assert_eq!(StepDdf::from_json_str(bare, InfinityRule::Strict).unwrap(), f);
        let wrong = r#"{"steps": [{"breakpoint": "0", "value": "1/2"}], "value_at_infinity": "1"}"#;
        assert!(matches!(
            StepDdf::from_json_str(wrong, InfinityRule::Strict),
            Err(DdfError::InfinityMismatch { .. })
        ));
        assert_eq!(
            StepDdf::from_json_str(wrong, InfinityRule::Mate).unwrap(),
            StepDdf::constant(ratio(1, 2))
        );
        assert!(StepDdf::from_json_str("{", InfinityRule::Strict).is_err());
        let inf = r#"[{"breakpoint": "inf", "value": "1"}]"#;
        assert_eq!(
            StepDdf::from_json_str(inf, InfinityRule::Strict),
            Err(DdfError::InfiniteBreakpoint)
        );
    }
}
