//! One test per acceptance criterion. Each prints a single
//! `criterion N: PASS|FAIL ...` line straight to stderr so it shows up in
//! captured runs, then asserts.

use std::io::Write;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};

use quantagg::builtin::{builtin_finite_quantales, classify_rule, QuantaleSpec, RuleSelector};
use quantagg::continuous::{truncated_lawvere, DdfQuantale, Lawvere, StepDdf, TNorm};
use quantagg::morphisms::brute::default_roster;
use quantagg::morphisms::lift::{gdelta_expressibility, threshold_half_morphism, Expressibility};
use quantagg::morphisms::{
    classify_table, extend_aggregator, massanet_valero_refutation, qpm_aggregator_verdict, tabulate,
    verify_equivalences, NumericRule, Verdict,
};
use quantagg::numeric::{ratio, Ext, Rational};
use quantagg::quantale::{product_quantale, three_nilpotent, validate_finite_quantale, Product, DEFAULT_PRODUCT_CAP};
use quantagg::sampling::{random_step_ddf, seeded};
use quantagg::vcat::{aggregate_category, VCategory};
use quantagg::Quantale;

fn report(n: u32, pass: bool, detail: &str) {
    let status = if pass { "PASS" } else { "FAIL" };
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "criterion {n}: {status} {detail}");
}

#[test]
fn criterion_1_characterizations_agree_over_default_roster() {
    let start = Instant::now();
    let mut disagreements = 0;
    let mut functions = 0;
    let mut three_self_maps = 0;
    for (a, v, b, w) in default_roster() {
        let s = verify_equivalences(&a, &v, &b, &w, 3).expect("roster fits the budgets");
        disagreements += s.disagreements.len();
        functions += s.functions;
        if a == "three-paper" && b == "three-paper" {
            three_self_maps = s.functions;
        }
    }
    let elapsed = start.elapsed();
    let pass = disagreements == 0 && three_self_maps == 27 && elapsed < Duration::from_secs(10);
    report(
        1,
        pass,
        &format!("{functions} functions, {disagreements} disagreements, {elapsed:.2?}"),
    );
    assert_eq!(disagreements, 0);
    assert_eq!(three_self_maps, 27);
    assert!(elapsed < Duration::from_secs(10), "{elapsed:?}");
}

#[test]
fn criterion_2_three_element_counterexample() {
    let q = three_nilpotent();
    // F(⊥) = x, F(x) = ⊥, F(⊤) = ⊤
    let r = classify_table(&[1, 0, 2], &q, &q).unwrap();
    let w = r.preserving.witness().cloned();
    let pass = r.symmetrically_preserving == Verdict::HoldsExhaustive
        && w.as_ref().is_some_and(|w| w.elements == ["bot", "top", "x"]);
    report(2, pass, &format!("preserving witness {:?}", w.map(|w| w.elements)));
    assert_eq!(r.symmetrically_preserving, Verdict::HoldsExhaustive);
    let w = r.preserving.witness().expect("preserving fails");
    assert_eq!(w.elements, ["bot", "top", "x"]);
    assert_eq!(r.asym_triplet_preserving.witness(), Some(w));
    assert_eq!((w.lhs.as_str(), w.rhs.as_str()), ("x", "bot"));
}

#[test]
fn criterion_3_sets_but_not_products() {
    let l = truncated_lawvere(3);
    let v = product_quantale(&[l.clone(), l.clone()], DEFAULT_PRODUCT_CAP).unwrap();
    let table = tabulate(&NumericRule::FirstZero, &v, &l).unwrap();
    let r = classify_table(&table, &v, &l).unwrap();
    let fiber = r.unit_fiber_singleton.witness().map(|w| w.elements.clone());

    let pq = Product::power(Lawvere, 2);
    let e = |a: i64, b: i64| vec![Ext::from_int(a), Ext::from_int(b)];
    let a = VCategory::new(
        pq,
        vec!["y1".into(), "y2".into()],
        vec![vec![e(0, 0), e(0, 0)], vec![e(0, 1), e(0, 0)]],
    )
    .unwrap();
    assert!(a.is_valid() && a.is_separated());
    let (out, violations) =
        aggregate_category(|x: &Vec<Ext>| NumericRule::FirstZero.eval(x), &a, Lawvere).unwrap();
    let both_zero = out.hom(0, 1).is_zero() && out.hom(1, 0).is_zero();

    let pass = r.preserving == Verdict::HoldsExhaustive
        && fiber.as_deref() == Some(&["(0,1)".to_string()][..])
        && violations.is_empty()
        && !out.is_separated()
        && both_zero;
    report(
        3,
        pass,
        &format!(
            "preserving {}, fiber witness {fiber:?}, aggregate rows {:?}",
            r.preserving.status(),
            out.label_rows()
        ),
    );
    assert_eq!(r.preserving, Verdict::HoldsExhaustive);
    assert_eq!(fiber, Some(vec!["(0,1)".to_string()]));
    assert!(!r.separately_preserving.holds());
    assert!(violations.is_empty());
    assert!(both_zero && !out.is_separated());
}

#[test]
fn criterion_4_massanet_valero_refutation() {
    let r = massanet_valero_refutation().unwrap();
    let d = &r.aggregate.entries;
    let direct = d[0][2].clone();
    let via = &d[0][1] + &d[1][2];
    let v = r.violation.clone();
    let pass = direct == Ext::from_int(2)
        && d[0][1] == Ext::from_int(1)
        && d[1][2] == Ext::zero()
        && via == Ext::from_int(1)
        && direct > via
        && v.as_ref().is_some_and(|v| v.points == ["x1", "x2", "x3"]);
    report(4, pass, &format!("F∘d(x1,x3) = {direct}, F∘d(x1,x2) + F∘d(x2,x3) = {via}"));
    assert!(r.d1.qpm_violation().is_none() && r.d2.qpm_violation().is_none());
    assert_eq!(direct, Ext::from_int(2));
    assert_eq!(via, Ext::from_int(1));
    let v = v.expect("triangle fails");
    assert_eq!(v.points, ["x1", "x2", "x3"]);
    assert_eq!((v.lhs.as_str(), v.rhs.as_str()), ("1", "2"));
}

/// `f(t) = max { v : b < t }` straight from the step list.
fn oracle_eval(f: &StepDdf, t: &Rational) -> Rational {
    f.steps()
        .iter()
        .filter(|(b, _)| b < t)
        .map(|(_, v)| v.clone())
        .max()
        .unwrap_or_else(Rational::zero)
}

fn oracle_tnorm(t: TNorm, a: &Rational, b: &Rational) -> Rational {
    match t {
        TNorm::Min => a.min(b).clone(),
        TNorm::Product => a * b,
        TNorm::Lukasiewicz => (a + b - Rational::one()).max(Rational::zero()),
    }
}

/// `sup_{r+s ≤ t} f(r) ∗ g(s)` on a mesh four times finer than the
/// breakpoint grid; `g` is isotone so `s = t − r` is enough.
fn mesh_convolution(f: &StepDdf, g: &StepDdf, tnorm: TNorm, t: &Rational) -> Rational {
    let step = ratio(1, 16);
    let mut best = Rational::zero();
    let mut r = Rational::zero();
    while &r <= t {
        let v = oracle_tnorm(tnorm, &oracle_eval(f, &r), &oracle_eval(g, &(t - &r)));
        best = best.max(v);
        r += &step;
    }
    best
}

#[test]
fn criterion_5_ddf_algebra() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut mesh_points = 0usize;
    let unit = StepDdf::unit();
    for tnorm in TNorm::ALL {
        let mut rng = seeded(0);
        for i in 0..200 {
            let f = random_step_ddf(&mut rng, 3);
            let g = random_step_ddf(&mut rng, 3);
            let h = random_step_ddf(&mut rng, 3);
            let c = |a: &StepDdf, b: &StepDdf| a.convolve(b, tnorm);
            let mut check = |name: &str, ok: bool| {
                if !ok {
                    failures.push(format!("{tnorm} #{i}: {name}"));
                }
            };
            check("unit", c(&f, &unit) == f && c(&unit, &f) == f);
            check("commutativity", c(&f, &g) == c(&g, &f));
            check("associativity", c(&c(&f, &g), &h) == c(&f, &c(&g, &h)));
            check("distributivity", c(&f, &g.join(&h)) == c(&f, &g).join(&c(&f, &h)));
            let fg = c(&f, &g);
            // breakpoints sit on the quarter grid of [0, 3]; sums on [0, 6]
            for k in 0..=56 {
                let t = ratio(k, 8);
                mesh_points += 1;
                if oracle_eval(&fg, &t) != mesh_convolution(&f, &g, tnorm, &t) {
                    failures.push(format!("{tnorm} #{i}: mesh at t = {k}/8"));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = failures.is_empty() && elapsed < Duration::from_secs(30);
    report(
        5,
        pass,
        &format!(
            "600 triples, {mesh_points} mesh points, {} failures, {elapsed:.2?}",
            failures.len()
        ),
    );
    assert!(failures.is_empty(), "{failures:?}");
    assert!(elapsed < Duration::from_secs(30), "{elapsed:?}");
}

#[test]
fn criterion_6_lifted_aggregators() {
    let min = RuleSelector::Numeric(NumericRule::Min);
    let mut min_lax = Vec::new();
    for t in TNorm::ALL {
        let from = QuantaleSpec::Ddf { tnorm: t, arity: 2 };
        let to = QuantaleSpec::Ddf { tnorm: t, arity: 1 };
        let r = classify_rule(&min, &from, &to, 500, 0).unwrap();
        min_lax.push((t, r.lax_morphism.clone()));
    }
    let prod = RuleSelector::Numeric(NumericRule::Prod);
    let from = QuantaleSpec::Ddf {
        tnorm: TNorm::Min,
        arity: 2,
    };
    let to = QuantaleSpec::Ddf {
        tnorm: TNorm::Min,
        arity: 1,
    };
    let r = classify_rule(&prod, &from, &to, 500, 0).unwrap();
    let w = r.tensor_lax.witness().cloned();
    let q = DdfQuantale::new(TNorm::Min);
    let one = StepDdf::constant(Rational::one());
    let half = StepDdf::constant(ratio(1, 2));
    let expected_elements = vec![
        format!("({},{})", q.label(&one), q.label(&half)),
        format!("({},{})", q.label(&half), q.label(&one)),
    ];
    let expected_sides = (q.label(&half), q.label(&StepDdf::constant(ratio(1, 4))));
    let all_min = min_lax.iter().all(|(_, v)| *v == Verdict::HoldsOnSamples);
    let pass = all_min
        && w.as_ref().is_some_and(|w| {
            w.elements == expected_elements && (w.lhs.clone(), w.rhs.clone()) == expected_sides
        });
    report(
        6,
        pass,
        &format!(
            "lifted min: {:?}; lifted prod witness {:?}",
            min_lax.iter().map(|(t, v)| format!("{t} {}", v.status())).collect::<Vec<_>>(),
            w.as_ref().map(|w| (&w.elements, &w.lhs, &w.rhs))
        ),
    );
    for (t, v) in &min_lax {
        assert_eq!(*v, Verdict::HoldsOnSamples, "{t}");
    }
    let w = w.expect("lifted product is not lax");
    assert_eq!(w.elements, expected_elements);
    assert_eq!((w.lhs, w.rhs), expected_sides);
}

#[test]
fn criterion_7_aggregators_on_lawvere_truncations() {
    let mut problems = Vec::new();
    for n in [2usize, 3, 5] {
        let l = truncated_lawvere(n);
        let v = product_quantale(&[l.clone(), l.clone()], DEFAULT_PRODUCT_CAP).unwrap();
        for rule in [NumericRule::Sum, NumericRule::Max, NumericRule::Min] {
            let r = classify_table(&tabulate(&rule, &v, &l).unwrap(), &v, &l).unwrap();
            let should = rule != NumericRule::Min;
            if r.preserving.holds() != should || r.separately_preserving.holds() != should {
                problems.push(format!("{rule} on trunc({n})²: preserving {}", r.preserving.status()));
            }
            let ext = extend_aggregator(&rule);
            let re = classify_table(&tabulate(&ext, &v, &l).unwrap(), &v, &l).unwrap();
            for ((name, a), (_, b)) in r.verdicts().into_iter().zip(re.verdicts()) {
                if a.holds() != b.holds() {
                    problems.push(format!("{rule} vs {ext} on trunc({n})²: {name}"));
                }
            }
        }
    }
    let mut min_witness = None;
    for rule in [NumericRule::Sum, NumericRule::Max, NumericRule::Min] {
        let q = qpm_aggregator_verdict(&rule, 2, 500, 0).unwrap();
        let qe = qpm_aggregator_verdict(&extend_aggregator(&rule), 2, 500, 0).unwrap();
        if q.quasi_pseudometric.holds() != qe.quasi_pseudometric.holds()
            || q.quasi_metric.holds() != qe.quasi_metric.holds()
        {
            problems.push(format!("{rule}: extension changes the numeric verdict"));
        }
        if rule == NumericRule::Min {
            min_witness = q.subadditive.witness().map(|w| w.elements.clone());
        } else if !q.quasi_metric.holds() {
            problems.push(format!("{rule}: not a quasi-metric aggregator"));
        }
    }
    let expected = vec!["(0,5)".to_string(), "(5,0)".to_string()];
    let pass = problems.is_empty() && min_witness.as_ref() == Some(&expected);
    report(7, pass, &format!("min subadditivity witness {min_witness:?}, problems {problems:?}"));
    assert!(problems.is_empty(), "{problems:?}");
    assert_eq!(min_witness, Some(expected));
}

#[test]
fn criterion_8_threshold_rule_is_not_a_lift() {
    let from = QuantaleSpec::Ddf {
        tnorm: TNorm::Product,
        arity: 1,
    };
    let r = classify_rule(&RuleSelector::ThresholdHalf, &from, &from, 500, 0).unwrap();
    let lax = r.lax_morphism.clone();

    let f = |fs: &[StepDdf]| Ok(threshold_half_morphism(&fs[0]));
    let e = gdelta_expressibility(&f, 1, 500, 0).unwrap();
    let conflict = match &e {
        Expressibility::Conflict { values, first, second } => {
            let mut pair = [
                (first.input.as_str(), first.t.as_str(), first.output.as_str()),
                (second.input.as_str(), second.t.as_str(), second.output.as_str()),
            ];
            pair.sort();
            values == "(0)" && pair == [("f_1/2", "1/3", "0"), ("f_1/3", "1/3", "1")]
        }
        Expressibility::NoConflictOnSamples { .. } => false,
    };
    let pass = lax == Verdict::HoldsOnSamples && conflict;
    report(
        8,
        pass,
        &format!("sampled laxity: {lax}; G_Δ conflict found: {conflict}"),
    );
    assert!(conflict, "{e:?}");
    assert_eq!(lax, Verdict::HoldsOnSamples);
}

#[test]
fn criterion_9_quantale_validation_and_mutations() {
    let start = Instant::now();
    let mut invalid_builtins = Vec::new();
    for (name, q) in builtin_finite_quantales() {
        let report = validate_finite_quantale(q.labels(), &q.leq_matrix(), &q.tensor_matrix(), q.unit_index())
            .unwrap();
        if !report.passed {
            invalid_builtins.push(name);
        }
    }
    let q = three_nilpotent();
    let (mut still_valid, mut rejected, mut unwitnessed) = (0, 0, 0);
    for a in q.elements() {
        for b in q.elements() {
            for c in q.elements() {
                if c == q.tensor_idx(a, b) {
                    continue;
                }
                let tensor = q.tensor_with_entry(a, b, c);
                let report =
                    validate_finite_quantale(q.labels(), &q.leq_matrix(), &tensor, q.unit_index()).unwrap();
                if report.passed {
                    still_valid += 1;
                } else {
                    rejected += 1;
                    if report.violations.iter().any(|v| v.witness.is_empty() || v.labels.is_empty()) {
                        unwitnessed += 1;
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = invalid_builtins.is_empty()
        && unwitnessed == 0
        && still_valid + rejected == 18
        && elapsed < Duration::from_secs(5);
    report(
        9,
        pass,
        &format!(
            "builtins invalid {invalid_builtins:?}; 18 mutations: {still_valid} valid, {rejected} rejected with witnesses, {elapsed:.2?}"
        ),
    );
    assert!(invalid_builtins.is_empty(), "{invalid_builtins:?}");
    assert_eq!(unwitnessed, 0);
    assert_eq!(still_valid + rejected, 18);
    assert!(elapsed < Duration::from_secs(5));
}
