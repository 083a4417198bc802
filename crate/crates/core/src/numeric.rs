//! Exact nonnegative rationals extended with a distinguished infinity.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational used throughout the crate.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseNumberError {
    #[error("cannot parse `{0}` as a rational")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("negative value `{0}` where a nonnegative one is required")]
    Negative(String),
}

/// Builds `num/den` exactly. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `p`, `p/q` or a terminating decimal such as `0.25`.
pub fn parse_rational(s: &str) -> Result<Rational, ParseNumberError> {
    let t = s.trim();
    let malformed = || ParseNumberError::Malformed(s.to_string());
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| malformed())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| malformed())?;
        if d.is_zero() {
            return Err(ParseNumberError::ZeroDenominator(s.to_string()));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(malformed());
        }
        let negative = whole.starts_with('-');
        let whole = if whole.is_empty() || whole == "-" {
            BigInt::zero()
        } else {
            BigInt::from_str(whole).map_err(|_| malformed())?
        };
        let digits = BigInt::from_str(frac).map_err(|_| malformed())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let frac = Rational::new(digits, scale);
        let whole = Rational::from_integer(whole.abs());
        let v = whole + frac;
        return Ok(if negative { -v } else { v });
    }
    BigInt::from_str(t)
        .map(Rational::from_integer)
        .map_err(|_| malformed())
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// An element of `[0, ∞]`: an exact nonnegative rational or infinity.
///
/// The derived `Ord` is the numeric order (`Inf` is largest). Quantale code
/// built on the Lawvere quantale reverses it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Ext {
    Fin(Rational),
    Inf,
}

impl Ext {
    pub fn zero() -> Self {
        Ext::Fin(Rational::zero())
    }

    pub fn from_int(n: i64) -> Self {
        assert!(n >= 0, "Ext must be nonnegative");
        Ext::Fin(int(n))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        let r = ratio(num, den);
        assert!(!r.is_negative(), "Ext must be nonnegative");
        Ext::Fin(r)
    }

    pub fn is_inf(&self) -> bool {
        matches!(self, Ext::Inf)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Ext::Fin(r) if r.is_zero())
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Ext::Fin(r) => Some(r),
            Ext::Inf => None,
        }
    }

    /// Product with the convention `0 · ∞ = 0`.
    pub fn mul(&self, other: &Ext) -> Ext {
        if self.is_zero() || other.is_zero() {
            return Ext::zero();
        }
        match (self, other) {
            (Ext::Fin(a), Ext::Fin(b)) => Ext::Fin(a * b),
            _ => Ext::Inf,
        }
    }

    /// Truncated difference `max(self - other, 0)`; `∞ - ∞` is taken as 0.
    pub fn monus(&self, other: &Ext) -> Ext {
        match (self, other) {
            (Ext::Fin(a), Ext::Fin(b)) => {
                if a > b {
                    Ext::Fin(a - b)
                } else {
                    Ext::zero()
                }
            }
            (Ext::Inf, Ext::Fin(_)) => Ext::Inf,
            (_, Ext::Inf) => Ext::zero(),
        }
    }
}

impl PartialOrd for Ext {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ext {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Ext::Fin(a), Ext::Fin(b)) => a.cmp(b),
            (Ext::Fin(_), Ext::Inf) => Ordering::Less,
            (Ext::Inf, Ext::Fin(_)) => Ordering::Greater,
            (Ext::Inf, Ext::Inf) => Ordering::Equal,
        }
    }
}

impl Add for &Ext {
    type Output = Ext;

    fn add(self, rhs: &Ext) -> Ext {
        match (self, rhs) {
            (Ext::Fin(a), Ext::Fin(b)) => Ext::Fin(a + b),
            _ => Ext::Inf,
        }
    }
}

impl Add for Ext {
    type Output = Ext;

    fn add(self, rhs: Ext) -> Ext {
        &self + &rhs
    }
}

impl From<Rational> for Ext {
    fn from(r: Rational) -> Self {
        Ext::Fin(r)
    }
}

impl fmt::Display for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ext::Fin(r) => f.write_str(&fmt_rational(r)),
            Ext::Inf => f.write_str("inf"),
        }
    }
}

impl FromStr for Ext {
    type Err = ParseNumberError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if matches!(t, "inf" | "Inf" | "INF" | "∞" | "+inf" | "infinity") {
            return Ok(Ext::Inf);
        }
        let r = parse_rational(t)?;
        if r.is_negative() {
            return Err(ParseNumberError::Negative(s.to_string()));
        }
        Ok(Ext::Fin(r))
    }
}

impl serde::Serialize for Ext {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// True when `r` lies in the closed unit interval.
pub fn in_unit_interval(r: &Rational) -> bool {
    !r.is_negative() && *r <= Rational::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_decimals_and_infinity() {
        assert_eq!(parse_rational("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("0.25").unwrap(), ratio(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), ratio(-3, 2));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!("inf".parse::<Ext>().unwrap(), Ext::Inf);
        assert!(matches!(
            parse_rational("1/0"),
            Err(ParseNumberError::ZeroDenominator(_))
        ));
        assert!(matches!("-1".parse::<Ext>(), Err(ParseNumberError::Negative(_))));
        assert!(parse_rational("a/b").is_err());
        assert!(parse_rational("1.").is_err());
    }

    #[test]
    fn infinity_absorbs_addition() {
        assert_eq!(&Ext::from_int(3) + &Ext::Inf, Ext::Inf);
        assert_eq!(Ext::from_ratio(1, 2) + Ext::from_ratio(1, 3), Ext::from_ratio(5, 6));
        assert!(Ext::from_int(1_000_000) < Ext::Inf);
        assert_eq!(Ext::zero().mul(&Ext::Inf), Ext::zero());
        assert_eq!(Ext::Inf.monus(&Ext::from_int(2)), Ext::Inf);
    }

    #[test]
    fn display_is_canonical() {
        assert_eq!(Ext::from_ratio(2, 4).to_string(), "1/2");
        assert_eq!(Ext::from_int(2).to_string(), "2");
        assert_eq!(Ext::Inf.to_string(), "inf");
    }
}
