//! Numeric verdicts for aggregating extended quasi-pseudometrics on
//! products: a rule `F: [0,∞]ᴵ → [0,∞]` does so exactly when it is isotone,
//! subadditive and `F(0) = 0`, and it also aggregates quasi-metrics when in
//! addition `F⁻¹(0) = {0}`.

use serde::Serialize;

use super::rule::NumericRule;
use super::{MorphismError, Verdict, Witness};
use crate::continuous::Lawvere;
use crate::numeric::{ratio, Ext};
use crate::sampling::{random_ext, seeded};
use crate::vcat::{aggregate_category, diagonal_category, DistanceMatrix, VCategory, VcViolation};

/// Scale of the disjoint-support subadditivity probes.
pub const PROBE_SCALE: i64 = 5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QpmReport {
    pub rule: String,
    pub arity: usize,
    pub seed: u64,
    pub samples: usize,
    pub isotone: Verdict,
    pub subadditive: Verdict,
    pub zero_at_zero: Verdict,
    pub zero_fiber_singleton: Verdict,
    pub quasi_pseudometric: Verdict,
    pub quasi_metric: Verdict,
    /// Coordinate distances on three points whose aggregate breaks the
    /// triangle inequality, built from an isotonicity failure.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub construction: Option<Construction>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Construction {
    pub coordinates: Vec<DistanceMatrix>,
    pub aggregate: DistanceMatrix,
    pub violation: Option<VcViolation>,
}

fn tuple(xs: &[Ext]) -> String {
    let parts: Vec<String> = xs.iter().map(Ext::to_string).collect();
    format!("({})", parts.join(","))
}

fn add(x: &[Ext], y: &[Ext]) -> Vec<Ext> {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

fn dominated(x: &[Ext], y: &[Ext]) -> bool {
    x.iter().zip(y).all(|(a, b)| a <= b)
}

fn grid(arity: usize) -> Vec<Vec<Ext>> {
    let mut values = vec![
        Ext::zero(),
        Ext::from_ratio(1, 2),
        Ext::from_int(1),
        Ext::from_int(PROBE_SCALE),
        Ext::Inf,
    ];
    while values.len() > 2 && values.len().pow(arity as u32) > 256 {
        values.remove(values.len() / 2);
    }
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|t: Vec<Ext>| {
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

/// `x = s·1_S`, `y = s·1_{I∖S}` for every nonempty proper `S`, with the
/// bitmask of `S` (coordinate 1 is the lowest bit) running downwards.
fn disjoint_pairs(arity: usize) -> Vec<(Vec<Ext>, Vec<Ext>)> {
    let full = (1u64 << arity.min(16)) - 1;
    (1..full)
        .rev()
        .map(|mask| {
            let side = |inside: bool| {
                (0..arity)
                    .map(|i| {
                        if (mask >> i & 1 == 1) == inside {
                            Ext::from_int(PROBE_SCALE)
                        } else {
                            Ext::zero()
                        }
                    })
                    .collect()
            };
            (side(true), side(false))
        })
        .collect()
}

/// Distances on `t1, t2, t3` with `d(t1,t2) = b`, `d(t2,t3) = 0`,
/// `d(t1,t3) = a` and `2b` elsewhere. Each coordinate is a quasi-pseudometric
/// when `a ≤ b`, and the aggregate fails the triangle inequality at
/// `(t1, t2, t3)` when `F(a) > F(b) + F(0)`.
pub fn three_point_construction(a: &[Ext], b: &[Ext]) -> Vec<DistanceMatrix> {
    let points: Vec<String> = (1..=3).map(|i| format!("t{i}")).collect();
    a.iter()
        .zip(b)
        .map(|(ai, bi)| {
            let twice = bi + bi;
            let entries = (0..3)
                .map(|x| {
                    (0..3)
                        .map(|y| match (x, y) {
                            _ if x == y => Ext::zero(),
                            (0, 1) => bi.clone(),
                            (1, 2) => Ext::zero(),
                            (0, 2) => ai.clone(),
                            _ => twice.clone(),
                        })
                        .collect()
                })
                .collect();
            DistanceMatrix {
                points: points.clone(),
                entries,
            }
        })
        .collect()
}

fn lawvere_category(d: &DistanceMatrix) -> VCategory<Lawvere> {
    VCategory::new(Lawvere, d.points.clone(), d.entries.clone()).expect("square matrix")
}

/// Aggregates coordinate distance matrices on a common point set with `F`.
pub fn aggregate_diagonal(
    rule: &NumericRule,
    coordinates: &[DistanceMatrix],
) -> Result<(DistanceMatrix, Option<VcViolation>), MorphismError> {
    let cats: Vec<VCategory<Lawvere>> = coordinates.iter().map(lawvere_category).collect();
    let diag = diagonal_category(&cats).map_err(|e| MorphismError::MapSyntax {
        line: 0,
        message: e.to_string(),
    })?;
    let (out, violations) =
        aggregate_category(|x: &Vec<Ext>| rule.eval(x).map_err(MorphismError::from), &diag, Lawvere)?;
    Ok((DistanceMatrix::from_category(&out), violations.into_iter().next()))
}

pub fn qpm_aggregator_verdict(
    rule: &NumericRule,
    arity: usize,
    samples: usize,
    seed: u64,
) -> Result<QpmReport, MorphismError> {
    rule.check_arity(arity)?;
    let f = |x: &[Ext]| rule.eval(x);
    let zero = vec![Ext::zero(); arity];
    let mut rng = seeded(seed);
    let random: Vec<(Vec<Ext>, Vec<Ext>)> = (0..samples)
        .map(|_| {
            let mut draw = || (0..arity).map(|_| random_ext(&mut rng, 4, 6, 0.1)).collect::<Vec<_>>();
            (draw(), draw())
        })
        .collect();
    let grid = grid(arity);
    let grid_pairs = || grid.iter().flat_map(|x| grid.iter().map(move |y| (x, y)));

    // isotonicity: grid pairs, then x ≤ x + y on samples
    let mut isotone = None;
    let mut construction = None;
    let shifted: Vec<(Vec<Ext>, Vec<Ext>)> =
        random.iter().map(|(x, y)| (x.clone(), add(x, y))).collect();
    for (x, y) in grid_pairs().chain(shifted.iter().map(|(x, y)| (x, y))) {
        if !dominated(x, y) {
            continue;
        }
        let (fx, fy) = (f(x)?, f(y)?);
        if fx > fy {
            isotone = Some(Witness {
                elements: vec![tuple(x), tuple(y)],
                relation: "x ≤ y ⇒ F(x) ≤ F(y)".into(),
                lhs: fx.to_string(),
                rhs: fy.to_string(),
                detail: None,
            });
            let coordinates = three_point_construction(x, y);
            let (aggregate, violation) = aggregate_diagonal(rule, &coordinates)?;
            construction = Some(Construction {
                coordinates,
                aggregate,
                violation,
            });
            break;
        }
    }

    let mut subadditive = None;
    let pairs = disjoint_pairs(arity);
    for (x, y) in pairs
        .iter()
        .map(|(x, y)| (x, y))
        .chain(grid_pairs())
        .chain(random.iter().map(|(x, y)| (x, y)))
    {
        let lhs = f(&add(x, y))?;
        let rhs = &f(x)? + &f(y)?;
        if lhs > rhs {
            subadditive = Some(Witness {
                elements: vec![tuple(x), tuple(y)],
                relation: "F(x+y) ≤ F(x)+F(y)".into(),
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
                detail: None,
            });
            break;
        }
    }

    let f0 = f(&zero)?;
    let zero_at_zero = if f0.is_zero() {
        Verdict::HoldsExhaustive
    } else {
        Verdict::Fails(Witness {
            elements: vec![tuple(&zero)],
            relation: "F(0) = 0".into(),
            lhs: f0.to_string(),
            rhs: "0".into(),
            detail: None,
        })
    };

    let mut fiber = None;
    for x in grid.iter().chain(random.iter().map(|(x, _)| x)) {
        if *x != zero && f(x)?.is_zero() {
            fiber = Some(Witness {
                elements: vec![tuple(x)],
                relation: "F(x) = 0 ⇒ x = 0".into(),
                lhs: tuple(x),
                rhs: tuple(&zero),
                detail: Some(format!("F{} = 0", tuple(x))),
            });
            break;
        }
    }

    let sampled = |w: Option<Witness>| w.map_or(Verdict::HoldsOnSamples, Verdict::Fails);
    let isotone = sampled(isotone);
    let subadditive = sampled(subadditive);
    let zero_fiber_singleton = sampled(fiber);
    let quasi_pseudometric = Verdict::all_of(&[&isotone, &subadditive, &zero_at_zero]);
    let quasi_metric = Verdict::all_of(&[&quasi_pseudometric, &zero_fiber_singleton]);
    Ok(QpmReport {
        rule: rule.to_string(),
        arity,
        seed,
        samples,
        isotone,
        subadditive,
        zero_at_zero,
        zero_fiber_singleton,
        quasi_pseudometric,
        quasi_metric,
        construction,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Refutation {
    pub d1: DistanceMatrix,
    pub d2: DistanceMatrix,
    pub aggregate: DistanceMatrix,
    pub violation: Option<VcViolation>,
}

/// The two quasi-metrics on `{x1, x2, x3}` that show the piecewise rule
/// `massanet-valero` does not aggregate quasi-metrics. The aggregate has
/// `d(x1,x3) = 2` but `d(x1,x2) + d(x2,x3) = 1 + 0 = 1`.
pub fn massanet_valero_refutation() -> Result<Refutation, MorphismError> {
    let points: Vec<String> = (1..=3).map(|i| format!("x{i}")).collect();
    let build = |g: &dyn Fn(usize, usize) -> Ext| DistanceMatrix {
        points: points.clone(),
        entries: (1..=3).map(|i| (1..=3).map(|j| g(i, j)).collect()).collect(),
    };
    let d1 = build(&|i, j| if i <= j { Ext::zero() } else { Ext::from_int(1) });
    let d2 = build(&|i, j| match (i, j) {
        _ if i == j => Ext::zero(),
        (1, 2) => Ext::from_int(1),
        (2, 3) => Ext::zero(),
        (1, 3) => Ext::Fin(ratio(1, 2)),
        _ => Ext::from_int(2),
    });
    let (aggregate, violation) =
        aggregate_diagonal(&NumericRule::MassanetValero, &[d1.clone(), d2.clone()])?;
    Ok(Refutation {
        d1,
        d2,
        aggregate,
        violation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn refutation_inputs_are_quasi_metrics() {
        let r = massanet_valero_refutation().unwrap();
        assert!(r.d1.qpm_violation().is_none());
        assert!(r.d2.qpm_violation().is_none());
        let v = r.violation.unwrap();
        assert_eq!(v.points, vec!["x1", "x2", "x3"]);
        assert_eq!((v.lhs.as_str(), v.rhs.as_str()), ("1", "2"));
        assert_eq!(r.aggregate.entries[0][2], Ext::from_int(2));
    }

    #[test]
    fn massanet_valero_is_not_isotone() {
        let r = qpm_aggregator_verdict(&NumericRule::MassanetValero, 2, 100, 0).unwrap();
        let w = r.isotone.witness().unwrap();
        assert_eq!(w.elements, vec!["(0,1/2)", "(0,1)"]);
        let c = r.construction.unwrap();
        assert!(c.coordinates.iter().all(|d| d.qpm_violation().is_none()));
        let v = c.violation.unwrap();
        assert_eq!(v.points, vec!["t1", "t2", "t3"]);
        assert_eq!((v.lhs.as_str(), v.rhs.as_str()), ("1", "2"));
        assert!(!r.quasi_pseudometric.holds());
    }

    #[test]
    fn max_and_sum_are_quasi_metric_aggregators() {
        for rule in [NumericRule::Max, NumericRule::Sum] {
            let r = qpm_aggregator_verdict(&rule, 3, 200, 0).unwrap();
            assert_eq!(r.quasi_metric, Verdict::HoldsOnSamples, "{rule}");
            assert_eq!(r.zero_at_zero, Verdict::HoldsExhaustive);
        }
    }

    #[test]
    fn min_is_not_subadditive() {
        let r = qpm_aggregator_verdict(&NumericRule::Min, 2, 100, 0).unwrap();
        let w = r.subadditive.witness().unwrap();
        assert_eq!(w.elements, vec!["(0,5)", "(5,0)"]);
        assert_eq!((w.lhs.as_str(), w.rhs.as_str()), ("5", "0"));
        assert!(r.isotone.holds());
    }

    #[test]
    fn first_zero_aggregates_pseudometrics_only() {
        let r = qpm_aggregator_verdict(&NumericRule::FirstZero, 2, 100, 0).unwrap();
        assert!(r.quasi_pseudometric.holds());
        assert_eq!(r.zero_fiber_singleton.witness().unwrap().elements, vec!["(0,1/2)"]);
    }

    #[test]
    fn construction_coordinates_are_quasi_pseudometrics() {
        let a = [Ext::from_int(1), Ext::zero(), Ext::Inf];
        let b = [Ext::from_int(3), Ext::from_int(2), Ext::Inf];
        for d in three_point_construction(&a, &b) {
            assert!(d.qpm_violation().is_none(), "{d:?}");
        }
    }
}
