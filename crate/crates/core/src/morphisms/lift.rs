//! Pointwise lifts `G_Δ((fᵢ)ᵢ)(t) = G((fᵢ(t))ᵢ)` of unit-interval rules to
//! distance distribution functions, and a search for maps that are not
//! lifts of anything.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use super::rule::NumericRule;
use super::{MorphismError, Verdict, Witness};
use crate::continuous::StepDdf;
use crate::numeric::{fmt_rational, int, ratio, Rational};
use crate::sampling::{random_step_ddf, random_unit, seeded};

/// Depth of the chains `x·(1 − 2⁻ᵐ)` used by [`check_left_continuity`].
pub const CHAIN_DEPTH: u32 = 40;

fn tuple(xs: &[Rational]) -> String {
    let parts: Vec<String> = xs.iter().map(fmt_rational).collect();
    format!("({})", parts.join(","))
}

/// `G_Δ` on step functions, exact on the merged breakpoints.
///
/// Every `fᵢ` is constant on `(bₖ, bₖ₊₁]` between consecutive merged
/// breakpoints, so the lift is again a step function. It is an error when
/// `G(0,…,0) ≠ 0` or when `G` is not isotone along the tuple.
pub fn lift_f_delta(
    g: &dyn Fn(&[Rational]) -> Result<Rational, MorphismError>,
    fs: &[StepDdf],
) -> Result<StepDdf, MorphismError> {
    let label = || {
        let parts: Vec<String> = fs.iter().map(StepDdf::to_string).collect();
        format!("({})", parts.join(","))
    };
    let zeros = vec![Rational::zero(); fs.len()];
    let g0 = g(&zeros)?;
    if !g0.is_zero() {
        return Err(MorphismError::NotDdf {
            input: label(),
            message: format!("G{} = {}, not 0", tuple(&zeros), fmt_rational(&g0)),
        });
    }
    let mut breaks: Vec<Rational> = fs.iter().flat_map(|f| f.breakpoints().cloned()).collect();
    breaks.sort();
    breaks.dedup();
    let mut steps = Vec::with_capacity(breaks.len());
    for b in breaks {
        let values: Vec<Rational> = fs.iter().map(|f| f.eval_right(&b)).collect();
        steps.push((b, g(&values)?));
    }
    StepDdf::from_steps(steps).map_err(|e| MorphismError::NotDdf {
        input: label(),
        message: e.to_string(),
    })
}

/// The lift of a numeric rule, evaluated on `[0, 1]`.
pub fn lift_rule(rule: &NumericRule) -> impl Fn(&Vec<StepDdf>) -> Result<StepDdf, MorphismError> + '_ {
    move |fs: &Vec<StepDdf>| lift_f_delta(&|xs: &[Rational]| Ok(rule.eval_unit(xs)?), fs)
}

/// Sampled left-continuity: along `x·(1 − 2⁻ᵐ)` the gap `G(x) − G(chain)`
/// must shrink. A gap that stays positive and does not shrink between
/// depth `M/2` and `M` is reported.
pub fn check_left_continuity(
    g: &dyn Fn(&[Rational]) -> Result<Rational, MorphismError>,
    arity: usize,
    samples: usize,
    seed: u64,
) -> Result<Verdict, MorphismError> {
    let mut rng = seeded(seed);
    let mut targets: Vec<Vec<Rational>> = vec![vec![Rational::one(); arity]];
    for k in 0..arity {
        let mut e = vec![Rational::zero(); arity];
        e[k] = Rational::one();
        targets.push(e);
    }
    targets.push(vec![ratio(1, 2); arity]);
    targets.extend((0..samples).map(|_| (0..arity).map(|_| random_unit(&mut rng, 8)).collect::<Vec<_>>()));

    let at_depth = |x: &[Rational], m: u32| -> Result<Rational, MorphismError> {
        let r = Rational::one() - Rational::new(1.into(), num_bigint::BigInt::from(2).pow(m));
        let y: Vec<Rational> = x.iter().map(|v| v * &r).collect();
        g(&y)
    };
    for x in targets {
        if x.iter().all(Zero::is_zero) {
            continue;
        }
        let gx = g(&x)?;
        let deep = at_depth(&x, CHAIN_DEPTH)?;
        let half = at_depth(&x, CHAIN_DEPTH / 2)?;
        let gap = &gx - &deep;
        if gap > Rational::zero() && gap >= &gx - &half {
            return Ok(Verdict::Fails(Witness {
                elements: vec![tuple(&x)],
                relation: "G(x) = ⋁ₘ G(x·(1 − 2⁻ᵐ))".into(),
                lhs: fmt_rational(&gx),
                rhs: fmt_rational(&deep),
                detail: Some(format!("gap {} at depth {CHAIN_DEPTH}", fmt_rational(&gap))),
            }));
        }
    }
    Ok(Verdict::HoldsOnSamples)
}

/// `F(f) = f_{0,1}` when `f(1/2) > 0`, and the threshold at `1/2` otherwise.
pub fn threshold_half_morphism(f: &StepDdf) -> StepDdf {
    if f.eval_at(&ratio(1, 2)) > Rational::zero() {
        StepDdf::unit()
    } else {
        StepDdf::threshold(ratio(1, 2))
    }
}

/// One evaluation `F(f)(t)` of a DDF map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Context {
    pub input: String,
    pub t: String,
    pub output: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum Expressibility {
    /// No two contexts disagreed; a sampled statement only.
    NoConflictOnSamples { contexts: usize },
    /// Both contexts feed the same values `(fᵢ(t))ᵢ` to any pointwise `G`
    /// but `F` answers differently, so `F` is not a lift.
    Conflict {
        values: String,
        first: Context,
        second: Context,
    },
}

impl Expressibility {
    pub fn is_expressible(&self) -> bool {
        matches!(self, Expressibility::NoConflictOnSamples { .. })
    }
}

/// The thresholds `f_α` for `α ∈ {0, 1/3, 1/2, 2/3, 1, 2}`.
pub fn threshold_family() -> Vec<(String, StepDdf)> {
    [int(0), ratio(1, 3), ratio(1, 2), ratio(2, 3), int(1), int(2)]
        .into_iter()
        .map(|a| (format!("f_{}", fmt_rational(&a)), StepDdf::threshold(a)))
        .collect()
}

/// The evaluation points, all positive: every DDF vanishes at 0.
pub fn probe_times() -> Vec<Rational> {
    vec![ratio(1, 3), ratio(1, 2), ratio(2, 3), int(1), int(2)]
}

/// Searches for two contexts `(f, t)`, `(f′, t′)` with `fᵢ(t) = f′ᵢ(t′)` but
/// `F(f)(t) ≠ F(f′)(t′)`. Candidates are tuples of thresholds, then seeded
/// random step functions; times run outermost.
pub fn gdelta_expressibility(
    f: &dyn Fn(&[StepDdf]) -> Result<StepDdf, MorphismError>,
    arity: usize,
    samples: usize,
    seed: u64,
) -> Result<Expressibility, MorphismError> {
    let family = threshold_family();
    let mut candidates: Vec<(String, Vec<StepDdf>)> = vec![(String::new(), Vec::new())];
    for _ in 0..arity.min(3) {
        candidates = candidates
            .into_iter()
            .flat_map(|(name, fs)| {
                family.iter().map(move |(n, g)| {
                    let mut fs = fs.clone();
                    fs.push(g.clone());
                    let name = if name.is_empty() { n.clone() } else { format!("{name},{n}") };
                    (name, fs)
                })
            })
            .collect();
    }
    if arity > 3 {
        candidates.clear();
    }
    let mut rng = seeded(seed);
    for _ in 0..samples {
        let fs: Vec<StepDdf> = (0..arity).map(|_| random_step_ddf(&mut rng, 3)).collect();
        let parts: Vec<String> = fs.iter().map(StepDdf::to_string).collect();
        candidates.push((parts.join(","), fs));
    }
    let outputs: Vec<StepDdf> = candidates
        .iter()
        .map(|(_, fs)| f(fs))
        .collect::<Result<_, _>>()?;

    let mut seen: BTreeMap<Vec<Rational>, Context> = BTreeMap::new();
    let mut contexts = 0;
    for t in probe_times() {
        for ((name, fs), out) in candidates.iter().zip(&outputs) {
            contexts += 1;
            let values: Vec<Rational> = fs.iter().map(|g| g.eval_at(&t)).collect();
            let here = Context {
                input: if arity == 1 { name.clone() } else { format!("({name})") },
                t: fmt_rational(&t),
                output: fmt_rational(&out.eval_at(&t)),
            };
            match seen.get(&values) {
                Some(prev) if prev.output != here.output => {
                    return Ok(Expressibility::Conflict {
                        values: tuple(&values),
                        first: prev.clone(),
                        second: here,
                    });
                }
                Some(_) => {}
                None => {
                    seen.insert(values, here);
                }
            }
        }
    }
    Ok(Expressibility::NoConflictOnSamples { contexts })
}
