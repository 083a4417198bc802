//! The infinite quantales of the theory, realized with exact arithmetic:
//! the Lawvere quantale `([0,∞], ≥, +)`, the unit interval with a t-norm,
//! and distance distribution functions under sup-convolution (see [`ddf`]).
//! Finite truncations of the first two give table quantales for
//! exhaustive testing.

pub mod ddf;

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::numeric::{fmt_rational, int, ratio, Ext, Rational};
use crate::quantale::{Decode, FiniteQuantale, NumericEmbedding, Quantale};

pub use ddf::{DdfError, DdfQuantale, StepDdf};

/// Left-continuous t-norms with exact rational evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TNorm {
    Min,
    Product,
    Lukasiewicz,
}

impl TNorm {
    pub const ALL: [TNorm; 3] = [TNorm::Min, TNorm::Product, TNorm::Lukasiewicz];

    pub fn eval(self, a: &Rational, b: &Rational) -> Rational {
        match self {
            TNorm::Min => a.min(b).clone(),
            TNorm::Product => a * b,
            TNorm::Lukasiewicz => {
                let s = a + b - Rational::one();
                if s > Rational::zero() {
                    s
                } else {
                    Rational::zero()
                }
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TNorm::Min => "min",
            TNorm::Product => "prod",
            TNorm::Lukasiewicz => "luk",
        }
    }
}

impl fmt::Display for TNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown t-norm `{0}` (expected min, prod or luk)")]
pub struct UnknownTNorm(pub String);

impl FromStr for TNorm {
    type Err = UnknownTNorm;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "min" | "minimum" => Ok(TNorm::Min),
            "prod" | "product" => Ok(TNorm::Product),
            "luk" | "lukasiewicz" => Ok(TNorm::Lukasiewicz),
            other => Err(UnknownTNorm(other.to_string())),
        }
    }
}

/// Exact `a ∗ b` for a t-norm on `[0, 1]`.
pub fn tnorm_eval(tnorm: TNorm, a: &Rational, b: &Rational) -> Rational {
    tnorm.eval(a, b)
}

/// `([0,1], ≤, ∗)` for a left-continuous t-norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnitInterval {
    pub tnorm: TNorm,
}

impl UnitInterval {
    pub fn new(tnorm: TNorm) -> Self {
        UnitInterval { tnorm }
    }
}

impl Quantale for UnitInterval {
    type Elem = Rational;

    fn leq(&self, a: &Rational, b: &Rational) -> bool {
        a <= b
    }

    fn tensor(&self, a: &Rational, b: &Rational) -> Rational {
        self.tnorm.eval(a, b)
    }

    fn unit(&self) -> Rational {
        Rational::one()
    }

    fn bottom(&self) -> Rational {
        Rational::zero()
    }

    fn join(&self, a: &Rational, b: &Rational) -> Rational {
        a.max(b).clone()
    }

    fn label(&self, a: &Rational) -> String {
        fmt_rational(a)
    }
}

/// The Lawvere quantale `([0,∞], ≤ᵒᵖ, +)`. Its order is the reverse of the
/// numeric one, so the unit `0` is the top and `∞` the bottom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Lawvere;

impl Quantale for Lawvere {
    type Elem = Ext;

    fn leq(&self, a: &Ext, b: &Ext) -> bool {
        b <= a
    }

    fn tensor(&self, a: &Ext, b: &Ext) -> Ext {
        a + b
    }

    fn unit(&self) -> Ext {
        Ext::zero()
    }

    fn bottom(&self) -> Ext {
        Ext::Inf
    }

    fn join(&self, a: &Ext, b: &Ext) -> Ext {
        a.min(b).clone()
    }

    fn label(&self, a: &Ext) -> String {
        a.to_string()
    }
}

/// `{0, 1, …, n, ∞}` with reversed order and addition capped at `n`
/// (anything above `n` becomes `∞`). Indices run `0..=n` then `∞` last.
pub fn truncated_lawvere(n: usize) -> FiniteQuantale {
    assert!(n >= 1, "truncation level must be positive");
    let inf = n + 1;
    let mut labels: Vec<String> = (0..=n).map(|i| i.to_string()).collect();
    labels.push("inf".into());
    let size = n + 2;
    // reversed numeric order: a ⪯ b iff b ≤ a
    let leq = (0..size)
        .map(|a| (0..size).map(|b| b <= a).collect())
        .collect();
    let tensor = (0..size)
        .map(|a| {
            (0..size)
                .map(|b| if a + b > n { inf } else { a + b })
                .collect()
        })
        .collect();
    let mut values: Vec<Ext> = (0..=n).map(|i| Ext::from_int(i as i64)).collect();
    values.push(Ext::Inf);
    FiniteQuantale::new(labels, leq, tensor, 0)
        .expect("truncated Lawvere quantale is valid")
        .with_embedding(NumericEmbedding::scalar(
            values,
            Decode::CapToInfinity(Ext::from_int(n as i64)),
        ))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GridError {
    #[error("the {0} t-norm is not closed on a finite grid")]
    NotGridClosed(TNorm),
    #[error("grid resolution must be positive")]
    ZeroResolution,
}

/// `{0, 1/n, …, 1}` with the restriction of `min` or Łukasiewicz.
pub fn grid_unit_quantale(tnorm: TNorm, n: usize) -> Result<FiniteQuantale, GridError> {
    if n == 0 {
        return Err(GridError::ZeroResolution);
    }
    if tnorm == TNorm::Product {
        return Err(GridError::NotGridClosed(tnorm));
    }
    let values: Vec<Rational> = (0..=n).map(|i| ratio(i as i64, n as i64)).collect();
    let labels = values.iter().map(fmt_rational).collect();
    let denom = int(n as i64);
    let q = FiniteQuantale::from_chain(
        labels,
        |a, b| {
            let v = tnorm.eval(&values[a], &values[b]) * &denom;
            debug_assert!(v.is_integer());
            v.to_integer().try_into().expect("grid index")
        },
        n,
    )
    .expect("grid t-norm quantale is valid");
    Ok(q.with_embedding(NumericEmbedding::scalar(
        values.into_iter().map(Ext::Fin).collect(),
        Decode::Exact,
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantale::validate_finite_quantale;

    fn assert_valid(q: &FiniteQuantale) {
        let r =
            validate_finite_quantale(q.labels(), &q.leq_matrix(), &q.tensor_matrix(), q.unit_index())
                .unwrap();
        assert!(r.passed, "{r}");
    }

    #[test]
    fn tnorm_examples() {
        let (h, t) = (ratio(1, 2), ratio(1, 3));
        assert_eq!(tnorm_eval(TNorm::Product, &h, &t), ratio(1, 6));
        assert_eq!(tnorm_eval(TNorm::Min, &h, &t), ratio(1, 3));
        assert_eq!(tnorm_eval(TNorm::Lukasiewicz, &h, &t), Rational::zero());
        assert_eq!(
            tnorm_eval(TNorm::Lukasiewicz, &ratio(3, 4), &ratio(1, 2)),
            ratio(1, 4)
        );
    }

    #[test]
    fn truncated_lawvere_caps_addition() {
        let q = truncated_lawvere(2);
        let idx = |l: &str| q.index_of(l).unwrap();
        assert_eq!(q.tensor_idx(idx("2"), idx("1")), idx("inf"));
        assert_eq!(q.tensor_idx(idx("1"), idx("1")), idx("2"));
        assert_eq!(q.unit_index(), idx("0"));
        assert_eq!(q.bottom_index(), idx("inf"));
        for a in q.elements() {
            assert_eq!(q.tensor_idx(idx("0"), a), a);
            assert!(q.leq_idx(a, idx("0")));
        }
    }

    #[test]
    fn grid_examples() {
        let q = grid_unit_quantale(TNorm::Lukasiewicz, 4).unwrap();
        let idx = |l: &str| q.index_of(l).unwrap();
        assert_eq!(q.tensor_idx(idx("1/2"), idx("3/4")), idx("1/4"));
        assert_eq!(q.tensor_idx(idx("1/4"), idx("1/2")), idx("0"));
        let m = grid_unit_quantale(TNorm::Min, 5).unwrap();
        for a in m.elements() {
            assert_eq!(m.tensor_idx(a, m.unit_index()), a);
        }
        assert_eq!(
            grid_unit_quantale(TNorm::Product, 3).unwrap_err(),
            GridError::NotGridClosed(TNorm::Product)
        );
    }

    #[test]
    fn truncations_and_grids_validate_up_to_six() {
        for n in 1..=6 {
            assert_valid(&truncated_lawvere(n));
            assert_valid(&grid_unit_quantale(TNorm::Min, n).unwrap());
            assert_valid(&grid_unit_quantale(TNorm::Lukasiewicz, n).unwrap());
        }
    }

    #[test]
    fn lawvere_order_is_reversed() {
        let l = Lawvere;
        assert!(l.leq(&Ext::from_int(5), &Ext::from_int(2)));
        assert!(l.leq(&Ext::Inf, &Ext::zero()));
        assert_eq!(l.join(&Ext::from_int(5), &Ext::from_int(2)), Ext::from_int(2));
        assert_eq!(l.sup([].iter()), Ext::Inf);
    }
}
