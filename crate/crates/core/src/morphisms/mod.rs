//! Maps between quantales and the properties that decide whether they
//! aggregate enriched categories.
//!
//! [`classify`] computes the primitive properties (isotonicity, the unit
//! condition, tensor laxity, preservation of asymmetric and symmetric
//! triangle triplets, the unit fiber) and derives the preservation verdicts
//! from them:
//!
//! | verdict | characterization |
//! |---|---|
//! | preserving, Cat-preserving | asymmetric triplets and `F(1) = 1` |
//! | separately preserving | preserving and `F⁻¹(1) = {1}` |
//! | symmetrically preserving | triplets and `F(1) = 1` |
//! | symmetrically Cat-preserving | isotone, triplets and `F(1) = 1` |
//!
//! The equivalences that should hold between different characterizations
//! (for instance preserving against lax morphism) are cross-checked and any
//! disagreement is listed in the report.

pub mod aggregators;
pub mod brute;
pub mod lift;
pub mod rule;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::numeric::Ext;
use crate::quantale::{FiniteQuantale, Quantale};
use crate::sampling::{seeded, SampleRng};

pub use aggregators::{massanet_valero_refutation, qpm_aggregator_verdict, QpmReport};
pub use brute::{
    brute_force_preserving, default_roster, enumerate_categories, verify_equivalences,
    BruteForceReport, CategoryFamily, EquivalenceSummary,
};
pub use lift::{
    check_left_continuity, gdelta_expressibility, lift_f_delta, threshold_half_morphism,
    Expressibility,
};
pub use rule::{extend_aggregator, NumericRule, RuleError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error("F({input}) = {value} is not an element of the codomain")]
    NotClosed { input: String, value: String },
    #[error("quantale `{0}` has no numeric interpretation")]
    NoEmbedding(String),
    #[error("map line {line}: {message}")]
    MapSyntax { line: usize, message: String },
    #[error("map mentions unknown element `{0}`")]
    UnknownElement(String),
    #[error("map gives two images for `{0}`")]
    ConflictingImage(String),
    #[error("map is partial: no image for `{0}`")]
    Partial(String),
    #[error("{what} needs {count} candidates, above the budget of {cap}")]
    Budget {
        what: String,
        count: u128,
        cap: u128,
    },
    #[error("F({input}) is not a distribution function: {message}")]
    NotDdf { input: String, message: String },
}

/// A concrete instance of a failed inequality `lhs ⪯ rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub elements: Vec<String>,
    pub relation: String,
    pub lhs: String,
    pub rhs: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Witness {
    /// The negated relation between `lhs` and `rhs`.
    pub fn failed_symbol(&self) -> &'static str {
        if self.relation.contains('⪯') {
            "⋠"
        } else if self.relation.contains('≤') {
            "≰"
        } else {
            "≠"
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}): {} fails, {} {} {}",
            self.elements.join(", "),
            self.relation,
            self.lhs,
            self.failed_symbol(),
            self.rhs
        )?;
        if let Some(d) = &self.detail {
            write!(f, " [{d}]")?;
        }
        Ok(())
    }
}

/// Sampled passes are never reported as proofs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "status", content = "witness")]
pub enum Verdict {
    HoldsExhaustive,
    HoldsOnSamples,
    Fails(Witness),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        !matches!(self, Verdict::Fails(_))
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Fails(w) => Some(w),
            _ => None,
        }
    }

    pub fn status(&self) -> &'static str {
        match self {
            Verdict::HoldsExhaustive => "holds_exhaustive",
            Verdict::HoldsOnSamples => "holds_on_samples",
            Verdict::Fails(_) => "fails",
        }
    }

    fn holding(exhaustive: bool) -> Verdict {
        if exhaustive {
            Verdict::HoldsExhaustive
        } else {
            Verdict::HoldsOnSamples
        }
    }

    /// The first failure among `parts`, or a pass that is exhaustive only
    /// if every part is.
    pub fn all_of(parts: &[&Verdict]) -> Verdict {
        if let Some(w) = parts.iter().find_map(|v| v.witness()) {
            return Verdict::Fails(w.clone());
        }
        Verdict::holding(parts.iter().all(|v| **v == Verdict::HoldsExhaustive))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::HoldsExhaustive => f.write_str("holds (exhaustive)"),
            Verdict::HoldsOnSamples => f.write_str("holds on samples"),
            Verdict::Fails(w) => write!(f, "fails: {w}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exhaustive,
    Sampled,
}

/// The elements a classification looks at.
pub enum Domain<'g, E> {
    /// Every element, in index order. Witnesses are lexicographically least.
    Exhaustive(Vec<E>),
    /// Structured probes first, then `samples` seeded random draws per check.
    Sampled {
        probes: Vec<E>,
        samples: usize,
        seed: u64,
        generate: &'g dyn Fn(&mut SampleRng) -> E,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub mode: Mode,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub isotone: Verdict,
    /// `1_W ⪯ F(1_V)`, the form used by the lax-morphism definition.
    pub unit_inequality: Verdict,
    /// `F(1_V) = 1_W`.
    pub unit_equality: Verdict,
    pub tensor_lax: Verdict,
    pub lax_morphism: Verdict,
    pub asym_triplet_preserving: Verdict,
    pub triplet_preserving: Verdict,
    pub unit_fiber_singleton: Verdict,
    pub preserving: Verdict,
    pub separately_preserving: Verdict,
    pub symmetrically_preserving: Verdict,
    pub cat_preserving: Verdict,
    pub symmetrically_cat_preserving: Verdict,
    /// Equivalences that should hold but did not on the checked elements.
    pub disagreements: Vec<String>,
}

impl ClassificationReport {
    pub fn verdicts(&self) -> Vec<(&'static str, &Verdict)> {
        vec![
            ("isotone", &self.isotone),
            ("unit_inequality", &self.unit_inequality),
            ("unit_equality", &self.unit_equality),
            ("tensor_lax", &self.tensor_lax),
            ("lax_morphism", &self.lax_morphism),
            ("asym_triplet_preserving", &self.asym_triplet_preserving),
            ("triplet_preserving", &self.triplet_preserving),
            ("unit_fiber_singleton", &self.unit_fiber_singleton),
            ("preserving", &self.preserving),
            ("separately_preserving", &self.separately_preserving),
            ("symmetrically_preserving", &self.symmetrically_preserving),
            ("cat_preserving", &self.cat_preserving),
            ("symmetrically_cat_preserving", &self.symmetrically_cat_preserving),
        ]
    }

    /// `{verdicts, witnesses, mode, seed, samples, disagreements}`.
    pub fn to_json(&self) -> serde_json::Value {
        let mut verdicts = serde_json::Map::new();
        let mut witnesses = serde_json::Map::new();
        for (name, v) in self.verdicts() {
            verdicts.insert(name.into(), v.status().into());
            if let Some(w) = v.witness() {
                witnesses.insert(name.into(), serde_json::to_value(w).expect("witness serializes"));
            }
        }
        serde_json::json!({
            "verdicts": verdicts,
            "witnesses": witnesses,
            "mode": self.mode,
            "seed": self.seed,
            "samples": self.samples,
            "disagreements": self.disagreements,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (name, v) in self.verdicts() {
            out.push_str(&format!("{:<30} {}\n", name.replace('_', " "), v));
        }
        out.push_str(&format!("mode: {:?}", self.mode).to_lowercase());
        if let (Some(seed), Some(samples)) = (self.seed, self.samples) {
            out.push_str(&format!(" (seed {seed}, {samples} samples)"));
        }
        out.push('\n');
        for d in &self.disagreements {
            out.push_str(&format!("DISAGREEMENT: {d}\n"));
        }
        out
    }
}

/// Evaluates the primitive properties of `f: V → W` on `domain` and derives
/// the preservation verdicts.
pub fn classify<V, W, F>(
    f: F,
    v: &V,
    w: &W,
    domain: &Domain<'_, V::Elem>,
) -> Result<ClassificationReport, MorphismError>
where
    V: Quantale,
    W: Quantale,
    F: Fn(&V::Elem) -> Result<W::Elem, MorphismError>,
{
    let mut c = Checker {
        v,
        w,
        f: &f,
        exhaustive: matches!(domain, Domain::Exhaustive(_)),
    };
    let prims = match domain {
        Domain::Exhaustive(elems) => c.exhaustive(elems)?,
        Domain::Sampled {
            probes,
            samples,
            seed,
            generate,
        } => c.sampled(probes, *samples, *seed, *generate)?,
    };
    let (mode, seed, samples) = match domain {
        Domain::Exhaustive(_) => (Mode::Exhaustive, None, None),
        Domain::Sampled { samples, seed, .. } => (Mode::Sampled, Some(*seed), Some(*samples)),
    };
    Ok(derive(prims, mode, seed, samples))
}

struct Primitives {
    isotone: Verdict,
    unit_inequality: Verdict,
    unit_equality: Verdict,
    tensor_lax: Verdict,
    asym: Verdict,
    triplets: Verdict,
    fiber: Verdict,
}

fn derive(p: Primitives, mode: Mode, seed: Option<u64>, samples: Option<usize>) -> ClassificationReport {
    let lax = Verdict::all_of(&[&p.isotone, &p.unit_inequality, &p.tensor_lax]);
    let preserving = Verdict::all_of(&[&p.asym, &p.unit_equality]);
    let separately = Verdict::all_of(&[&preserving, &p.fiber]);
    let symmetric = Verdict::all_of(&[&p.triplets, &p.unit_equality]);
    let sym_cat = Verdict::all_of(&[&p.isotone, &p.triplets, &p.unit_equality]);

    let mut disagreements = Vec::new();
    let mut agree = |name: &str, a: bool, b: bool| {
        if a != b {
            disagreements.push(format!("{name}: {a} vs {b}"));
        }
    };
    agree(
        "unit inequality vs unit equality",
        p.unit_inequality.holds(),
        p.unit_equality.holds(),
    );
    agree("lax morphism vs preserving", lax.holds(), preserving.holds());
    agree(
        "preserving vs symmetrically Cat-preserving",
        preserving.holds(),
        sym_cat.holds(),
    );
    agree(
        "lax morphism with singleton unit fiber vs separately preserving",
        lax.holds() && p.fiber.holds(),
        separately.holds(),
    );
    if p.asym.holds() && !p.triplets.holds() {
        disagreements.push("asymmetric triplets preserved but triplets not".into());
    }

    ClassificationReport {
        mode,
        seed,
        samples,
        isotone: p.isotone,
        unit_inequality: p.unit_inequality,
        unit_equality: p.unit_equality,
        tensor_lax: p.tensor_lax,
        lax_morphism: lax,
        asym_triplet_preserving: p.asym,
        triplet_preserving: p.triplets,
        unit_fiber_singleton: p.fiber,
        cat_preserving: preserving.clone(),
        preserving,
        separately_preserving: separately,
        symmetrically_preserving: symmetric,
        symmetrically_cat_preserving: sym_cat,
        disagreements,
    }
}

struct Checker<'a, V: Quantale, W: Quantale, F> {
    v: &'a V,
    w: &'a W,
    f: &'a F,
    exhaustive: bool,
}

/// One element with its image.
struct Point<A, B> {
    elem: A,
    image: B,
}

impl<'a, V, W, F> Checker<'a, V, W, F>
where
    V: Quantale,
    W: Quantale,
    F: Fn(&V::Elem) -> Result<W::Elem, MorphismError>,
{
    fn point(&self, e: &V::Elem) -> Result<Point<V::Elem, W::Elem>, MorphismError> {
        Ok(Point {
            elem: e.clone(),
            image: (self.f)(e)?,
        })
    }

    fn witness(&self, elems: &[&V::Elem], relation: &str, lhs: &W::Elem, rhs: &W::Elem) -> Verdict {
        Verdict::Fails(Witness {
            elements: elems.iter().map(|e| self.v.label(e)).collect(),
            relation: relation.into(),
            lhs: self.w.label(lhs),
            rhs: self.w.label(rhs),
            detail: self.w.explain_not_leq(lhs, rhs),
        })
    }

    fn holds(&self) -> Verdict {
        Verdict::holding(self.exhaustive)
    }

    /// Both unit conditions are settled by evaluating `F(1_V)` once.
    fn unit_checks(&self) -> Result<(Verdict, Verdict), MorphismError> {
        let u = self.v.unit();
        let fu = (self.f)(&u)?;
        let uw = self.w.unit();
        let ineq = if self.w.leq(&uw, &fu) {
            Verdict::HoldsExhaustive
        } else {
            self.witness(&[&u], "1_W ⪯ F(1_V)", &uw, &fu)
        };
        let eq = if self.w.is_unit(&fu) {
            Verdict::HoldsExhaustive
        } else {
            Verdict::Fails(Witness {
                elements: vec![self.v.label(&u)],
                relation: "F(1_V) = 1_W".into(),
                lhs: self.w.label(&fu),
                rhs: self.w.label(&uw),
                detail: None,
            })
        };
        Ok((ineq, eq))
    }

    fn isotone_pair(&self, a: &Point<V::Elem, W::Elem>, b: &Point<V::Elem, W::Elem>) -> Option<Verdict> {
        (self.v.leq(&a.elem, &b.elem) && !self.w.leq(&a.image, &b.image))
            .then(|| self.witness(&[&a.elem, &b.elem], "u ⪯ v ⇒ F(u) ⪯ F(v)", &a.image, &b.image))
    }

    fn tensor_pair(
        &self,
        a: &Point<V::Elem, W::Elem>,
        b: &Point<V::Elem, W::Elem>,
    ) -> Result<Option<Verdict>, MorphismError> {
        let lhs = self.w.tensor(&a.image, &b.image);
        let rhs = (self.f)(&self.v.tensor(&a.elem, &b.elem))?;
        Ok((!self.w.leq(&lhs, &rhs))
            .then(|| self.witness(&[&a.elem, &b.elem], "F(u)⋆F(v) ⪯ F(u∗v)", &lhs, &rhs)))
    }

    /// `(u, v, w)` with `u∗v ⪯ w` whose image breaks `F(u)⋆F(v) ⪯ F(w)`.
    fn asym_triple(
        &self,
        a: &Point<V::Elem, W::Elem>,
        b: &Point<V::Elem, W::Elem>,
        uv: &V::Elem,
        image_uv: &W::Elem,
        c: &Point<V::Elem, W::Elem>,
    ) -> Option<Verdict> {
        (self.v.leq(uv, &c.elem) && !self.w.leq(image_uv, &c.image)).then(|| {
            self.witness(
                &[&a.elem, &b.elem, &c.elem],
                "u∗v ⪯ w ⇒ F(u)⋆F(v) ⪯ F(w)",
                image_uv,
                &c.image,
            )
        })
    }

    fn is_triplet(&self, a: &V::Elem, b: &V::Elem, c: &V::Elem) -> bool {
        let q = self.v;
        q.leq(&q.tensor(a, b), c) && q.leq(&q.tensor(b, c), a) && q.leq(&q.tensor(a, c), b)
    }

    /// A triangle triplet whose image is not one.
    fn triplet(
        &self,
        a: &Point<V::Elem, W::Elem>,
        b: &Point<V::Elem, W::Elem>,
        c: &Point<V::Elem, W::Elem>,
    ) -> Option<Verdict> {
        if !self.is_triplet(&a.elem, &b.elem, &c.elem) {
            return None;
        }
        let w = self.w;
        let checks = [
            (&a.image, &b.image, &c.image, "F(u)⋆F(v) ⪯ F(w)"),
            (&b.image, &c.image, &a.image, "F(v)⋆F(w) ⪯ F(u)"),
            (&a.image, &c.image, &b.image, "F(u)⋆F(w) ⪯ F(v)"),
        ];
        checks.into_iter().find_map(|(x, y, z, rel)| {
            let lhs = w.tensor(x, y);
            (!w.leq(&lhs, z)).then(|| self.witness(&[&a.elem, &b.elem, &c.elem], rel, &lhs, z))
        })
    }

    fn fiber_point(&self, a: &Point<V::Elem, W::Elem>) -> Option<Verdict> {
        (self.w.is_unit(&a.image) && !self.v.is_unit(&a.elem)).then(|| {
            Verdict::Fails(Witness {
                elements: vec![self.v.label(&a.elem)],
                relation: "F(u) = 1_W ⇒ u = 1_V".into(),
                lhs: self.v.label(&a.elem),
                rhs: self.v.label(&self.v.unit()),
                detail: Some(format!("F({}) = {}", self.v.label(&a.elem), self.w.label(&a.image))),
            })
        })
    }

    fn exhaustive(&mut self, elems: &[V::Elem]) -> Result<Primitives, MorphismError> {
        let pts = elems
            .iter()
            .map(|e| self.point(e))
            .collect::<Result<Vec<_>, _>>()?;
        let (unit_inequality, unit_equality) = self.unit_checks()?;

        let isotone = first(pts.iter().flat_map(|a| pts.iter().map(move |b| (a, b))), |(a, b)| {
            Ok(self.isotone_pair(a, b))
        })?;
        let tensor_lax = first(pts.iter().flat_map(|a| pts.iter().map(move |b| (a, b))), |(a, b)| {
            self.tensor_pair(a, b)
        })?;
        let mut asym = None;
        'outer: for a in &pts {
            for b in &pts {
                let uv = self.v.tensor(&a.elem, &b.elem);
                let image_uv = self.w.tensor(&a.image, &b.image);
                for c in &pts {
                    if let Some(v) = self.asym_triple(a, b, &uv, &image_uv, c) {
                        asym = Some(v);
                        break 'outer;
                    }
                }
            }
        }
        let mut triplets = None;
        'outer2: for a in &pts {
            for b in &pts {
                for c in &pts {
                    if let Some(v) = self.triplet(a, b, c) {
                        triplets = Some(v);
                        break 'outer2;
                    }
                }
            }
        }
        let fiber = pts.iter().find_map(|a| self.fiber_point(a));
        Ok(Primitives {
            isotone: isotone.unwrap_or_else(|| self.holds()),
            unit_inequality,
            unit_equality,
            tensor_lax: tensor_lax.unwrap_or_else(|| self.holds()),
            asym: asym.unwrap_or_else(|| self.holds()),
            triplets: triplets.unwrap_or_else(|| self.holds()),
            fiber: fiber.unwrap_or_else(|| self.holds()),
        })
    }

    fn sampled(
        &mut self,
        probes: &[V::Elem],
        samples: usize,
        seed: u64,
        generate: &dyn Fn(&mut SampleRng) -> V::Elem,
    ) -> Result<Primitives, MorphismError> {
        let mut rng = seeded(seed);
        let pts = probes
            .iter()
            .map(|e| self.point(e))
            .collect::<Result<Vec<_>, _>>()?;
        let random = |rng: &mut SampleRng| self.point(&generate(rng));
        let pairs: Vec<(Point<_, _>, Point<_, _>)> = (0..samples)
            .map(|_| Ok((random(&mut rng)?, random(&mut rng)?)))
            .collect::<Result<_, MorphismError>>()?;
        let extra: Vec<Point<_, _>> = (0..samples)
            .map(|_| random(&mut rng))
            .collect::<Result<_, _>>()?;
        let (unit_inequality, unit_equality) = self.unit_checks()?;

        let probe_pairs = || pts.iter().flat_map(|a| pts.iter().map(move |b| (a, b)));
        let all_pairs = || probe_pairs().chain(pairs.iter().map(|(a, b)| (a, b)));

        let isotone = first(all_pairs(), |(a, b)| {
            if let Some(v) = self.isotone_pair(a, b) {
                return Ok(Some(v));
            }
            let join = self.point(&self.v.join(&a.elem, &b.elem))?;
            Ok(self.isotone_pair(a, &join))
        })?;
        let tensor_lax = first(all_pairs(), |(a, b)| self.tensor_pair(a, b))?;

        let mut asym = None;
        'probes: for a in &pts {
            for b in &pts {
                let uv = self.v.tensor(&a.elem, &b.elem);
                let image_uv = self.w.tensor(&a.image, &b.image);
                for c in &pts {
                    if let Some(v) = self.asym_triple(a, b, &uv, &image_uv, c) {
                        asym = Some(v);
                        break 'probes;
                    }
                }
            }
        }
        if asym.is_none() {
            asym = first(all_pairs().zip(extra.iter().cycle()), |((a, b), s)| {
                let uv = self.v.tensor(&a.elem, &b.elem);
                let image_uv = self.w.tensor(&a.image, &b.image);
                let tight = self.point(&uv)?;
                if let Some(v) = self.asym_triple(a, b, &uv, &image_uv, &tight) {
                    return Ok(Some(v));
                }
                let loose = self.point(&self.v.join(&uv, &s.elem))?;
                Ok(self.asym_triple(a, b, &uv, &image_uv, &loose))
            })?;
        }

        let mut triplets = None;
        'probes2: for a in &pts {
            for b in &pts {
                for c in &pts {
                    if let Some(v) = self.triplet(a, b, c) {
                        triplets = Some(v);
                        break 'probes2;
                    }
                }
            }
        }
        if triplets.is_none() {
            // (u, v, u∗v) is a triangle triplet in any integral quantale
            triplets = first(all_pairs(), |(a, b)| {
                let c = self.point(&self.v.tensor(&a.elem, &b.elem))?;
                Ok(self
                    .triplet(a, b, &c)
                    .or_else(|| self.triplet(a, &c, b))
                    .or_else(|| self.triplet(&c, a, b)))
            })?;
        }

        let fiber = pts
            .iter()
            .chain(extra.iter())
            .find_map(|a| self.fiber_point(a));
        Ok(Primitives {
            isotone: isotone.unwrap_or_else(|| self.holds()),
            unit_inequality,
            unit_equality,
            tensor_lax: tensor_lax.unwrap_or_else(|| self.holds()),
            asym: asym.unwrap_or_else(|| self.holds()),
            triplets: triplets.unwrap_or_else(|| self.holds()),
            fiber: fiber.unwrap_or_else(|| self.holds()),
        })
    }
}

fn first<I, T>(
    items: I,
    mut check: impl FnMut(T) -> Result<Option<Verdict>, MorphismError>,
) -> Result<Option<Verdict>, MorphismError>
where
    I: IntoIterator<Item = T>,
{
    for item in items {
        if let Some(v) = check(item)? {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

/// Exhaustive classification of a table `F: V → W` given by image indices.
pub fn classify_table(
    table: &[usize],
    v: &FiniteQuantale,
    w: &FiniteQuantale,
) -> Result<ClassificationReport, MorphismError> {
    classify(
        |u: &usize| Ok(table[*u]),
        v,
        w,
        &Domain::Exhaustive(v.elements().collect()),
    )
}

/// Reads `src -> dst` lines into an image table. The map must be total.
pub fn parse_map_file(
    text: &str,
    v: &FiniteQuantale,
    w: &FiniteQuantale,
) -> Result<Vec<usize>, MorphismError> {
    let mut table: Vec<Option<usize>> = vec![None; v.len()];
    let unquote = |s: &str| s.trim().trim_matches('"').to_string();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (src, dst) = line.split_once("->").ok_or_else(|| MorphismError::MapSyntax {
            line: i + 1,
            message: format!("expected `src -> dst`, found `{line}`"),
        })?;
        let (src, dst) = (unquote(src), unquote(dst));
        let a = v
            .index_of(&src)
            .ok_or_else(|| MorphismError::UnknownElement(src.clone()))?;
        let b = w
            .index_of(&dst)
            .ok_or_else(|| MorphismError::UnknownElement(dst.clone()))?;
        match table[a] {
            Some(prev) if prev != b => return Err(MorphismError::ConflictingImage(src)),
            _ => table[a] = Some(b),
        }
    }
    table
        .iter()
        .enumerate()
        .map(|(i, t)| t.ok_or_else(|| MorphismError::Partial(v.label_of(i).to_string())))
        .collect()
}

/// Tabulates a numeric rule between finite quantales that carry numeric
/// interpretations of their elements.
pub fn tabulate(
    rule: &NumericRule,
    v: &FiniteQuantale,
    w: &FiniteQuantale,
) -> Result<Vec<usize>, MorphismError> {
    let ve = v
        .embedding()
        .ok_or_else(|| MorphismError::NoEmbedding(v.labels().join(",")))?;
    let we = w
        .embedding()
        .ok_or_else(|| MorphismError::NoEmbedding(w.labels().join(",")))?;
    if we.dimension() != 1 {
        return Err(MorphismError::Rule(RuleError::Arity {
            rule: rule.to_string(),
            expected: "a one-dimensional codomain".into(),
            found: we.dimension(),
        }));
    }
    rule.check_arity(ve.dimension())?;
    v.elements()
        .map(|i| {
            let value: Ext = rule.eval(&ve.coords[i])?;
            we.decode(&value).ok_or_else(|| MorphismError::NotClosed {
                input: v.label_of(i).to_string(),
                value: value.to_string(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::continuous::truncated_lawvere;
    use crate::quantale::{product_quantale, three_nilpotent, two, DEFAULT_PRODUCT_CAP};

    #[test]
    fn three_element_map_is_symmetric_but_not_preserving() {
        let q = three_nilpotent();
        let report = classify_table(&[1, 0, 2], &q, &q).unwrap();
        assert_eq!(report.triplet_preserving, Verdict::HoldsExhaustive);
        assert_eq!(report.symmetrically_preserving, Verdict::HoldsExhaustive);
        let w = report.preserving.witness().unwrap();
        assert_eq!(w.elements, vec!["bot", "top", "x"]);
        assert_eq!((w.lhs.as_str(), w.rhs.as_str()), ("x", "bot"));
        assert!(report.disagreements.is_empty(), "{:?}", report.disagreements);
    }

    #[test]
    fn identity_is_everything() {
        let q = three_nilpotent();
        let report = classify_table(&[0, 1, 2], &q, &q).unwrap();
        for (name, v) in report.verdicts() {
            assert_eq!(*v, Verdict::HoldsExhaustive, "{name}");
        }
    }

    #[test]
    fn sum_on_truncated_square() {
        let l = truncated_lawvere(3);
        let v = product_quantale(&[l.clone(), l.clone()], DEFAULT_PRODUCT_CAP).unwrap();
        let table = tabulate(&NumericRule::Sum, &v, &l).unwrap();
        let r = classify_table(&table, &v, &l).unwrap();
        assert!(r.lax_morphism.holds() && r.separately_preserving.holds());
        let table = tabulate(&NumericRule::Min, &v, &l).unwrap();
        let r = classify_table(&table, &v, &l).unwrap();
        let w = r.tensor_lax.witness().unwrap();
        assert_eq!(w.elements, vec!["(0,1)", "(1,0)"]);
        assert!(r.disagreements.is_empty());
    }

    #[test]
    fn map_file_parsing() {
        let q = three_nilpotent();
        let t = parse_map_file("bot -> x\nx -> bot # swap\ntop -> top\n", &q, &q).unwrap();
        assert_eq!(t, vec![1, 0, 2]);
        assert_eq!(
            parse_map_file("bot -> x\nx -> bot\n", &q, &q),
            Err(MorphismError::Partial("top".into()))
        );
        assert!(matches!(
            parse_map_file("bot -> x\nbot -> top\n", &q, &q),
            Err(MorphismError::ConflictingImage(_))
        ));
        assert!(matches!(
            parse_map_file("bot => x", &q, &q),
            Err(MorphismError::MapSyntax { line: 1, .. })
        ));
        assert!(parse_map_file("bot -> y", &q, &q).is_err());
    }

    #[test]
    fn tabulate_reports_values_outside_the_codomain() {
        let t = two();
        let v = product_quantale(&[t.clone(), t.clone()], DEFAULT_PRODUCT_CAP).unwrap();
        assert!(matches!(
            tabulate(&NumericRule::Sum, &v, &t),
            Err(MorphismError::NotClosed { .. })
        ));
        assert!(tabulate(&NumericRule::Max, &v, &t).is_ok());
        assert!(tabulate(&NumericRule::Sum, &v, &three_nilpotent()).is_err());
    }
}
