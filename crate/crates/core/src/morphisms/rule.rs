//! Aggregation rules given by exact numeric formulas on tuples.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::numeric::{fmt_rational, in_unit_interval, parse_rational, Ext, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("unknown rule `{0}`")]
    Unknown(String),
    #[error("bad rule parameter in `{rule}`: {message}")]
    Parameter { rule: String, message: String },
    #[error("rule `{rule}` needs arity {expected}, got {found}")]
    Arity {
        rule: String,
        expected: String,
        found: usize,
    },
    #[error("rule `{rule}` maps {input} to {value}, outside [0, 1]")]
    OutOfUnitInterval {
        rule: String,
        input: String,
        value: String,
    },
    #[error("rule `{rule}` is undefined at {input}")]
    Undefined { rule: String, input: String },
}

/// `sum`, `max`, `min`, `wsum:w1,…`, `proj:i` (1-based), `prod`, the two
/// piecewise rules `massanet-valero` and `first-zero`, and `ext:RULE` for
/// the extension that sends every tuple with an infinite coordinate to `∞`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum NumericRule {
    Sum,
    Max,
    Min,
    WeightedSum(Vec<Rational>),
    Proj(usize),
    Prod,
    /// `∞` if `x₁ > 0`; else `2` if `0 < x₂ < 1`; else `1` if `x₂ ≥ 1`;
    /// `0` at the origin.
    MassanetValero,
    /// `0` if `x₁ = 0`, otherwise `1`.
    FirstZero,
    Extended(Box<NumericRule>),
}

impl NumericRule {
    /// `None` when any arity works.
    pub fn required_arity(&self) -> Option<usize> {
        match self {
            NumericRule::WeightedSum(w) => Some(w.len()),
            NumericRule::MassanetValero => Some(2),
            NumericRule::Extended(r) => r.required_arity(),
            _ => None,
        }
    }

    pub fn check_arity(&self, arity: usize) -> Result<(), RuleError> {
        let bad = |expected: String| RuleError::Arity {
            rule: self.to_string(),
            expected,
            found: arity,
        };
        if arity == 0 {
            return Err(bad("at least 1".into()));
        }
        if let Some(k) = self.required_arity() {
            if k != arity {
                return Err(bad(k.to_string()));
            }
        }
        match self {
            NumericRule::Proj(i) if *i == 0 || *i > arity => Err(bad(format!("at least {i}"))),
            NumericRule::Extended(r) => r.check_arity(arity),
            _ => Ok(()),
        }
    }

    /// Exact evaluation on `[0, ∞]`, with `0 · ∞ = 0`.
    pub fn eval(&self, xs: &[Ext]) -> Result<Ext, RuleError> {
        self.check_arity(xs.len())?;
        let zero = Ext::zero();
        Ok(match self {
            NumericRule::Sum => xs.iter().fold(zero, |a, x| &a + x),
            NumericRule::Max => xs.iter().max().cloned().unwrap_or(zero),
            NumericRule::Min => xs.iter().min().cloned().unwrap_or(zero),
            NumericRule::WeightedSum(w) => xs
                .iter()
                .zip(w)
                .fold(zero, |a, (x, wi)| &a + &x.mul(&Ext::Fin(wi.clone()))),
            NumericRule::Proj(i) => xs[i - 1].clone(),
            NumericRule::Prod => xs.iter().fold(Ext::Fin(Rational::one()), |a, x| a.mul(x)),
            NumericRule::MassanetValero => {
                let one = Ext::Fin(Rational::one());
                if !xs[0].is_zero() {
                    Ext::Inf
                } else if xs[1].is_zero() {
                    zero
                } else if xs[1] < one {
                    Ext::from_int(2)
                } else {
                    one
                }
            }
            NumericRule::FirstZero => {
                if xs[0].is_zero() {
                    zero
                } else {
                    Ext::Fin(Rational::one())
                }
            }
            NumericRule::Extended(r) => {
                if xs.iter().any(Ext::is_inf) {
                    Ext::Inf
                } else {
                    r.eval(xs)?
                }
            }
        })
    }

    /// Evaluation on `[0, 1]`; a result outside the interval is an error.
    pub fn eval_unit(&self, xs: &[Rational]) -> Result<Rational, RuleError> {
        let ext: Vec<Ext> = xs.iter().cloned().map(Ext::Fin).collect();
        let input = || {
            let parts: Vec<String> = xs.iter().map(fmt_rational).collect();
            format!("({})", parts.join(","))
        };
        match self.eval(&ext)? {
            Ext::Fin(r) if in_unit_interval(&r) => Ok(r),
            value => Err(RuleError::OutOfUnitInterval {
                rule: self.to_string(),
                input: input(),
                value: value.to_string(),
            }),
        }
    }
}

impl fmt::Display for NumericRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumericRule::Sum => f.write_str("sum"),
            NumericRule::Max => f.write_str("max"),
            NumericRule::Min => f.write_str("min"),
            NumericRule::WeightedSum(w) => {
                let parts: Vec<String> = w.iter().map(fmt_rational).collect();
                write!(f, "wsum:{}", parts.join(","))
            }
            NumericRule::Proj(i) => write!(f, "proj:{i}"),
            NumericRule::Prod => f.write_str("prod"),
            NumericRule::MassanetValero => f.write_str("massanet-valero"),
            NumericRule::FirstZero => f.write_str("first-zero"),
            NumericRule::Extended(r) => write!(f, "ext:{r}"),
        }
    }
}

impl FromStr for NumericRule {
    type Err = RuleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let param = |message: String| RuleError::Parameter {
            rule: s.to_string(),
            message,
        };
        if let Some(inner) = s.strip_prefix("ext:") {
            return Ok(NumericRule::Extended(Box::new(inner.parse()?)));
        }
        if let Some(ws) = s.strip_prefix("wsum:") {
            let w = ws
                .split(',')
                .map(|x| parse_rational(x).map_err(|e| param(e.to_string())))
                .collect::<Result<Vec<_>, _>>()?;
            if w.iter().any(|x| *x < Rational::zero()) {
                return Err(param("weights must be nonnegative".into()));
            }
            return Ok(NumericRule::WeightedSum(w));
        }
        if let Some(i) = s.strip_prefix("proj:") {
            let i: usize = i
                .trim()
                .parse()
                .map_err(|_| param(format!("`{i}` is not a coordinate")))?;
            if i == 0 {
                return Err(param("coordinates are numbered from 1".into()));
            }
            return Ok(NumericRule::Proj(i));
        }
        match s {
            "sum" => Ok(NumericRule::Sum),
            "max" => Ok(NumericRule::Max),
            "min" => Ok(NumericRule::Min),
            "prod" | "product" => Ok(NumericRule::Prod),
            "massanet-valero" | "mv" => Ok(NumericRule::MassanetValero),
            "first-zero" => Ok(NumericRule::FirstZero),
            other => Err(RuleError::Unknown(other.to_string())),
        }
    }
}

/// `F̄`: equal to `F` on finite tuples and `∞` whenever a coordinate is `∞`.
pub fn extend_aggregator(rule: &NumericRule) -> NumericRule {
    match rule {
        NumericRule::Extended(_) => rule.clone(),
        r => NumericRule::Extended(Box::new(r.clone())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::ratio;

    fn e(v: &[i64]) -> Vec<Ext> {
        v.iter()
            .map(|&x| if x < 0 { Ext::Inf } else { Ext::from_int(x) })
            .collect()
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["sum", "max", "min", "wsum:1,1/2", "proj:2", "prod", "massanet-valero", "first-zero", "ext:min"] {
            assert_eq!(s.parse::<NumericRule>().unwrap().to_string(), s);
        }
        assert!("proj:0".parse::<NumericRule>().is_err());
        assert!("wsum:1,-1".parse::<NumericRule>().is_err());
        assert!("median".parse::<NumericRule>().is_err());
    }

    #[test]
    fn massanet_valero_cases() {
        let f = NumericRule::MassanetValero;
        let half = vec![Ext::zero(), Ext::from_ratio(1, 2)];
        assert_eq!(f.eval(&half).unwrap(), Ext::from_int(2));
        assert_eq!(f.eval(&e(&[0, 1])).unwrap(), Ext::from_int(1));
        assert_eq!(f.eval(&e(&[0, -1])).unwrap(), Ext::from_int(1));
        assert_eq!(f.eval(&e(&[0, 0])).unwrap(), Ext::zero());
        assert_eq!(f.eval(&e(&[3, 0])).unwrap(), Ext::Inf);
        assert!(f.eval(&e(&[0, 0, 0])).is_err());
    }

    #[test]
    fn extension_only_changes_infinite_tuples() {
        let min = NumericRule::Min;
        let ext = extend_aggregator(&min);
        assert_eq!(min.eval(&e(&[-1, 2])).unwrap(), Ext::from_int(2));
        assert_eq!(ext.eval(&e(&[-1, 2])).unwrap(), Ext::Inf);
        assert_eq!(ext.eval(&e(&[3, 2])).unwrap(), Ext::from_int(2));
        assert_eq!(extend_aggregator(&ext), ext);
    }

    #[test]
    fn unit_interval_evaluation() {
        let p = NumericRule::Prod;
        assert_eq!(p.eval_unit(&[ratio(1, 2), ratio(1, 2)]).unwrap(), ratio(1, 4));
        assert!(matches!(
            NumericRule::Sum.eval_unit(&[ratio(3, 4), ratio(1, 2)]),
            Err(RuleError::OutOfUnitInterval { .. })
        ));
        let w = "wsum:1/2,1/2".parse::<NumericRule>().unwrap();
        assert_eq!(w.eval_unit(&[Rational::one(), Rational::zero()]).unwrap(), ratio(1, 2));
        assert_eq!(
            NumericRule::Prod.eval(&[Ext::zero(), Ext::Inf]).unwrap(),
            Ext::zero()
        );
    }
}
