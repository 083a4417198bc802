//! Named quantales and the glue that classifies a rule between them.
//!
//! Selector grammar: `two`, `three-paper`, `chain:N`, `lawvere-trunc:N`
//! (alias `lawvere:N`), `grid:luk:N`, `grid:min:N`, `lawvere`, `unit:T`,
//! `ddf:T` with `T` one of `min`, `prod`, `luk`. Factors are joined with `x`
//! (or `×`); a bare integer factor `k` repeats the previous factor `k − 1`
//! more times, so `lawvere:2x2` is the square of `lawvere-trunc:2`.
//! Anything else is read as a quantale file path.

use std::fmt;
use std::path::Path;

use num_traits::One;
use thiserror::Error;

use crate::continuous::{grid_unit_quantale, truncated_lawvere, DdfQuantale, GridError, Lawvere, StepDdf, TNorm, UnitInterval};
use crate::morphisms::lift::{lift_rule, threshold_half_morphism};
use crate::morphisms::{classify, classify_table, tabulate, ClassificationReport, Domain, MorphismError, NumericRule};
use crate::numeric::{ratio, Ext, Rational};
use crate::quantale::{
    chain, parse_quantale_file, product_quantale, three_nilpotent, two, FiniteQuantale, Product,
    ProductError, QuantaleFileError, DEFAULT_PRODUCT_CAP,
};
use crate::sampling::{random_ext, random_step_ddf, random_unit, SampleRng};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuiltinError {
    #[error("unknown quantale `{0}` (not a builtin name or a readable file)")]
    Unknown(String),
    #[error("bad parameter in `{name}`: {message}")]
    Parameter { name: String, message: String },
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Product(#[from] ProductError),
    #[error("cannot mix `{0}` and `{1}` in one product")]
    Mixed(String, String),
    #[error("{path}: {source}")]
    File {
        path: String,
        source: QuantaleFileError,
    },
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
}

/// A quantale named on the command line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuantaleSpec {
    Finite(FiniteQuantale),
    /// `[0, ∞]ᵏ` under addition.
    Lawvere { arity: usize },
    /// `[0, 1]ᵏ` under a t-norm.
    Unit { tnorm: TNorm, arity: usize },
    /// `Δ₊ᵏ` under convolution.
    Ddf { tnorm: TNorm, arity: usize },
}

impl QuantaleSpec {
    pub fn arity(&self) -> usize {
        match self {
            QuantaleSpec::Finite(q) => q.factor_sizes().len().max(1),
            QuantaleSpec::Lawvere { arity }
            | QuantaleSpec::Unit { arity, .. }
            | QuantaleSpec::Ddf { arity, .. } => *arity,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, QuantaleSpec::Finite(_))
    }
}

impl fmt::Display for QuantaleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let power = |f: &mut fmt::Formatter<'_>, base: String, k: usize| {
            if k == 1 {
                f.write_str(&base)
            } else {
                write!(f, "{base}^{k}")
            }
        };
        match self {
            QuantaleSpec::Finite(q) => write!(f, "finite quantale with {} elements", q.len()),
            QuantaleSpec::Lawvere { arity } => power(f, "lawvere".into(), *arity),
            QuantaleSpec::Unit { tnorm, arity } => power(f, format!("unit:{tnorm}"), *arity),
            QuantaleSpec::Ddf { tnorm, arity } => power(f, format!("ddf:{tnorm}"), *arity),
        }
    }
}

fn count(name: &str, s: &str) -> Result<usize, BuiltinError> {
    let n: usize = s.trim().parse().map_err(|_| BuiltinError::Parameter {
        name: name.into(),
        message: format!("`{s}` is not a size"),
    })?;
    if n == 0 {
        return Err(BuiltinError::Parameter {
            name: name.into(),
            message: "size must be positive".into(),
        });
    }
    Ok(n)
}

fn tnorm(name: &str, s: &str) -> Result<TNorm, BuiltinError> {
    s.parse().map_err(|e: crate::continuous::UnknownTNorm| BuiltinError::Parameter {
        name: name.into(),
        message: e.to_string(),
    })
}

/// One factor of a selector.
pub fn builtin_factor(name: &str) -> Result<QuantaleSpec, BuiltinError> {
    let parts: Vec<&str> = name.split(':').collect();
    let finite = |q| Ok(QuantaleSpec::Finite(q));
    match parts.as_slice() {
        ["two"] => finite(two()),
        ["three-paper"] => finite(three_nilpotent()),
        ["chain", n] => finite(chain(count(name, n)?)),
        ["lawvere-trunc", n] | ["lawvere", n] => finite(truncated_lawvere(count(name, n)?)),
        ["grid", t, n] => finite(grid_unit_quantale(tnorm(name, t)?, count(name, n)?)?),
        ["lawvere"] => Ok(QuantaleSpec::Lawvere { arity: 1 }),
        ["unit", t] => Ok(QuantaleSpec::Unit {
            tnorm: tnorm(name, t)?,
            arity: 1,
        }),
        ["ddf", t] => Ok(QuantaleSpec::Ddf {
            tnorm: tnorm(name, t)?,
            arity: 1,
        }),
        _ => Err(BuiltinError::Unknown(name.into())),
    }
}

/// Resolves a selector; existing files take precedence over builtin names.
pub fn parse_quantale_selector(selector: &str) -> Result<QuantaleSpec, BuiltinError> {
    let path = Path::new(selector);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| BuiltinError::Parameter {
            name: selector.into(),
            message: e.to_string(),
        })?;
        return parse_quantale_file(&text)
            .map(QuantaleSpec::Finite)
            .map_err(|source| BuiltinError::File {
                path: selector.into(),
                source,
            });
    }
    let mut factors: Vec<(String, QuantaleSpec)> = Vec::new();
    for raw in selector.split(['x', '×']) {
        let raw = raw.trim();
        if let Ok(k) = raw.parse::<usize>() {
            let (name, last) = factors
                .last()
                .cloned()
                .ok_or_else(|| BuiltinError::Unknown(selector.into()))?;
            if k == 0 {
                return Err(BuiltinError::Parameter {
                    name: selector.into(),
                    message: "a power must be positive".into(),
                });
            }
            factors.extend(std::iter::repeat((name, last)).take(k - 1));
            continue;
        }
        factors.push((raw.to_string(), builtin_factor(raw)?));
    }
    combine(selector, factors)
}

fn combine(selector: &str, factors: Vec<(String, QuantaleSpec)>) -> Result<QuantaleSpec, BuiltinError> {
    if factors.len() == 1 {
        return Ok(factors.into_iter().next().expect("one factor").1);
    }
    let (first_name, first) = factors.first().cloned().ok_or_else(|| BuiltinError::Unknown(selector.into()))?;
    if factors.iter().all(|(_, f)| f.is_finite()) {
        let qs: Vec<FiniteQuantale> = factors
            .into_iter()
            .map(|(_, f)| match f {
                QuantaleSpec::Finite(q) => q,
                _ => unreachable!("checked finite"),
            })
            .collect();
        return Ok(QuantaleSpec::Finite(product_quantale(&qs, DEFAULT_PRODUCT_CAP)?));
    }
    let k = factors.len();
    for (name, f) in &factors {
        let same = match (&first, f) {
            (QuantaleSpec::Lawvere { .. }, QuantaleSpec::Lawvere { .. }) => true,
            (QuantaleSpec::Unit { tnorm: a, .. }, QuantaleSpec::Unit { tnorm: b, .. }) => a == b,
            (QuantaleSpec::Ddf { tnorm: a, .. }, QuantaleSpec::Ddf { tnorm: b, .. }) => a == b,
            _ => false,
        };
        if !same {
            return Err(BuiltinError::Mixed(first_name.clone(), name.clone()));
        }
    }
    Ok(match first {
        QuantaleSpec::Lawvere { .. } => QuantaleSpec::Lawvere { arity: k },
        QuantaleSpec::Unit { tnorm, .. } => QuantaleSpec::Unit { tnorm, arity: k },
        QuantaleSpec::Ddf { tnorm, .. } => QuantaleSpec::Ddf { tnorm, arity: k },
        QuantaleSpec::Finite(_) => unreachable!("finite products handled above"),
    })
}

/// Every builtin finite quantale at small sizes, by selector.
pub fn builtin_finite_quantales() -> Vec<(String, FiniteQuantale)> {
    let mut out: Vec<(String, FiniteQuantale)> = vec![
        ("two".into(), two()),
        ("three-paper".into(), three_nilpotent()),
    ];
    for n in 1..=5 {
        out.push((format!("chain:{n}"), chain(n)));
    }
    for n in 0..=5 {
        if n > 0 {
            out.push((format!("lawvere-trunc:{n}"), truncated_lawvere(n)));
        }
    }
    for t in [TNorm::Lukasiewicz, TNorm::Min] {
        for n in 1..=6 {
            if let Ok(q) = grid_unit_quantale(t, n) {
                out.push((format!("grid:{}:{n}", t.name()), q));
            }
        }
    }
    out
}

/// A map to classify: a numeric rule (lifted pointwise on DDF domains) or
/// the threshold rule on `Δ₊`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleSelector {
    Numeric(NumericRule),
    ThresholdHalf,
}

impl std::str::FromStr for RuleSelector {
    type Err = MorphismError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "threshold-half" => Ok(RuleSelector::ThresholdHalf),
            other => Ok(RuleSelector::Numeric(other.parse()?)),
        }
    }
}

impl fmt::Display for RuleSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleSelector::Numeric(r) => r.fmt(f),
            RuleSelector::ThresholdHalf => f.write_str("threshold-half"),
        }
    }
}

/// Tuples over `values`, first coordinate most significant.
pub fn lex_tuples<T: Clone>(values: &[T], arity: usize) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|t: Vec<T>| {
                values.iter().map(move |v| {
                    let mut t = t.clone();
                    t.push(v.clone());
                    t
                })
            })
            .collect();
    }
    out
}

pub fn lawvere_probes() -> Vec<Ext> {
    vec![Ext::zero(), Ext::from_int(1), Ext::from_int(5), Ext::Inf]
}

pub fn unit_probes() -> Vec<Rational> {
    vec![Rational::one(), ratio(1, 2), ratio(0, 1)]
}

pub fn ddf_probes() -> Vec<StepDdf> {
    vec![
        StepDdf::constant(Rational::one()),
        StepDdf::constant(ratio(1, 2)),
        StepDdf::zero(),
        StepDdf::threshold(ratio(1, 4)),
        StepDdf::threshold(ratio(1, 2)),
        StepDdf::threshold(Rational::one()),
    ]
}

fn ddf_tuple(arity: usize) -> impl Fn(&mut SampleRng) -> Vec<StepDdf> {
    move |rng| (0..arity).map(|_| random_step_ddf(rng, 3)).collect()
}

/// Classifies `rule: from → to`. Finite pairs are tabulated and checked
/// exhaustively; the continuous ones are sampled.
pub fn classify_rule(
    rule: &RuleSelector,
    from: &QuantaleSpec,
    to: &QuantaleSpec,
    samples: usize,
    seed: u64,
) -> Result<ClassificationReport, BuiltinError> {
    let unsupported = || {
        BuiltinError::Unsupported(format!("cannot classify `{rule}` from {from} to {to}"))
    };
    if to.arity() != 1 && !to.is_finite() {
        return Err(unsupported());
    }
    let numeric = |r: &RuleSelector| match r {
        RuleSelector::Numeric(n) => Ok(n.clone()),
        RuleSelector::ThresholdHalf => Err(BuiltinError::Unsupported(
            "threshold-half is a map Δ₊ → Δ₊; use --from ddf:T --to ddf:T".into(),
        )),
    };
    match (from, to) {
        (QuantaleSpec::Finite(v), QuantaleSpec::Finite(w)) => {
            let table = tabulate(&numeric(rule)?, v, w)?;
            Ok(classify_table(&table, v, w)?)
        }
        (QuantaleSpec::Lawvere { arity }, QuantaleSpec::Lawvere { .. }) => {
            let r = numeric(rule)?;
            r.check_arity(*arity).map_err(MorphismError::from)?;
            let v = Product::power(Lawvere, *arity);
            let gen = move |rng: &mut SampleRng| -> Vec<Ext> {
                (0..*arity).map(|_| random_ext(rng, 4, 6, 0.1)).collect()
            };
            let domain = Domain::Sampled {
                probes: lex_tuples(&lawvere_probes(), *arity),
                samples,
                seed,
                generate: &gen,
            };
            let f = |x: &Vec<Ext>| Ok(r.eval(x)?);
            Ok(classify(f, &v, &Lawvere, &domain)?)
        }
        (QuantaleSpec::Unit { tnorm: s, arity }, QuantaleSpec::Unit { tnorm: t, .. }) => {
            let r = numeric(rule)?;
            r.check_arity(*arity).map_err(MorphismError::from)?;
            let v = Product::power(UnitInterval::new(*s), *arity);
            let gen = move |rng: &mut SampleRng| -> Vec<Rational> {
                (0..*arity).map(|_| random_unit(rng, 8)).collect()
            };
            let domain = Domain::Sampled {
                probes: lex_tuples(&unit_probes(), *arity),
                samples,
                seed,
                generate: &gen,
            };
            let f = |x: &Vec<Rational>| Ok(r.eval_unit(x)?);
            Ok(classify(f, &v, &UnitInterval::new(*t), &domain)?)
        }
        (QuantaleSpec::Ddf { tnorm: s, arity }, QuantaleSpec::Ddf { tnorm: t, .. }) => {
            let v = Product::power(DdfQuantale::new(*s), *arity);
            let w = DdfQuantale::new(*t);
            let gen = ddf_tuple(*arity);
            let domain = Domain::Sampled {
                probes: lex_tuples(&ddf_probes(), *arity),
                samples,
                seed,
                generate: &gen,
            };
            match rule {
                RuleSelector::Numeric(r) => {
                    r.check_arity(*arity).map_err(MorphismError::from)?;
                    Ok(classify(lift_rule(r), &v, &w, &domain)?)
                }
                RuleSelector::ThresholdHalf => {
                    if *arity != 1 {
                        return Err(unsupported());
                    }
                    let f = |x: &Vec<StepDdf>| Ok(threshold_half_morphism(&x[0]));
                    Ok(classify(f, &v, &w, &domain)?)
                }
            }
        }
        _ => Err(unsupported()),
    }
}
