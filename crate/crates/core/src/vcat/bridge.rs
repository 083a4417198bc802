//! Conversions from classical structures into enriched categories:
//! preorders over `2`, extended quasi-pseudometrics over the Lawvere
//! quantale, and fuzzy quasi-pseudometrics over `Δ₊(∗)`. Each bridge checks
//! the source axioms first and reports failures in the source's own terms.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use super::{VCatError, VCategory};
use crate::continuous::ddf::InfinityRule;
use crate::continuous::{DdfError, DdfQuantale, Lawvere, StepDdf, TNorm};
use crate::numeric::{fmt_rational, Ext, ParseNumberError};
use crate::quantale::{two, FiniteQuantale};

#[derive(Debug, Error)]
pub enum BridgeError {
    #[error("d({point},{point}) = {value}, but self-distances must be 0")]
    NonZeroDiagonal { point: String, value: String },
    #[error(
        "triangle inequality fails: d({x},{y}) = {direct} > d({x},{z}) + d({z},{y}) = {via}"
    )]
    Triangle {
        x: String,
        z: String,
        y: String,
        direct: String,
        via: String,
    },
    #[error("relation is not reflexive at {0}")]
    NotReflexive(String),
    #[error("relation is not transitive: {x} ≤ {z} and {z} ≤ {y} but not {x} ≤ {y}")]
    NotTransitive { x: String, z: String, y: String },
    #[error("M({point},{point},·) must equal f_01 (1 for every t > 0), got {found}")]
    FuzzyDiagonal { point: String, found: String },
    #[error(
        "fuzzy triangle fails at t = {t}: (M({x},{z},·) ⊛ M({z},{y},·))({t}) = {via} > M({x},{y},{t}) = {direct}"
    )]
    FuzzyTriangle {
        x: String,
        z: String,
        y: String,
        t: String,
        via: String,
        direct: String,
    },
    #[error("missing entry for pair ({0},{1})")]
    MissingEntry(String, String),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("CSV: {0}")]
    Csv(String),
    #[error(transparent)]
    Number(#[from] ParseNumberError),
    #[error("entry ({0},{1}): {2}")]
    Ddf(String, String, DdfError),
    #[error("{0}")]
    Json(String),
    #[error("reading {path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Shape(#[from] VCatError),
}

/// An `n × n` matrix of distances in `[0, ∞]` with labelled points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistanceMatrix {
    pub points: Vec<String>,
    pub entries: Vec<Vec<Ext>>,
}

impl DistanceMatrix {
    /// Reads a CSV whose first row and first column hold point labels.
    /// The top-left cell is ignored.
    pub fn from_csv(text: &str) -> Result<Self, BridgeError> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .flexible(true)
            .from_reader(text.as_bytes());
        let mut records = Vec::new();
        for r in reader.records() {
            records.push(r.map_err(|e| BridgeError::Csv(e.to_string()))?);
        }
        let header = records
            .first()
            .ok_or_else(|| BridgeError::Csv("empty distance matrix".into()))?;
        let points: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
        let n = points.len();
        if records.len() != n + 1 {
            return Err(BridgeError::Csv(format!(
                "{} labelled columns but {} data rows",
                n,
                records.len() - 1
            )));
        }
        let mut entries = Vec::with_capacity(n);
        for (i, row) in records.iter().skip(1).enumerate() {
            let line = i + 2;
            if row.len() != n + 1 {
                return Err(BridgeError::Syntax {
                    line,
                    message: format!("expected {} cells, found {}", n + 1, row.len()),
                });
            }
            if row[0] != points[i] {
                return Err(BridgeError::Syntax {
                    line,
                    message: format!("row label `{}` should be `{}`", &row[0], points[i]),
                });
            }
            let parsed = row
                .iter()
                .skip(1)
                .map(|c| c.parse::<Ext>())
                .collect::<Result<Vec<_>, _>>()?;
            entries.push(parsed);
        }
        Ok(DistanceMatrix { points, entries })
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
        let mut header = vec![String::new()];
        header.extend(self.points.iter().cloned());
        w.write_record(&header).expect("write to memory");
        for (p, row) in self.points.iter().zip(&self.entries) {
            let mut rec = vec![p.clone()];
            rec.extend(row.iter().map(Ext::to_string));
            w.write_record(&rec).expect("write to memory");
        }
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8")
    }

    pub fn from_category(c: &VCategory<Lawvere>) -> Self {
        DistanceMatrix {
            points: c.points().to_vec(),
            entries: c.rows(),
        }
    }

    /// The first failure of the quasi-pseudometric axioms, if any.
    pub fn qpm_violation(&self) -> Option<BridgeError> {
        let n = self.points.len();
        let p = &self.points;
        for x in 0..n {
            if !self.entries[x][x].is_zero() {
                return Some(BridgeError::NonZeroDiagonal {
                    point: p[x].clone(),
                    value: self.entries[x][x].to_string(),
                });
            }
        }
        for x in 0..n {
            for z in 0..n {
                for y in 0..n {
                    let via = &self.entries[x][z] + &self.entries[z][y];
                    if self.entries[x][y] > via {
                        return Some(BridgeError::Triangle {
                            x: p[x].clone(),
                            z: p[z].clone(),
                            y: p[y].clone(),
                            direct: self.entries[x][y].to_string(),
                            via: via.to_string(),
                        });
                    }
                }
            }
        }
        None
    }
}

/// An extended quasi-pseudometric as a Lawvere-category.
pub fn qpm_bridge(d: &DistanceMatrix) -> Result<VCategory<Lawvere>, BridgeError> {
    if let Some(e) = d.qpm_violation() {
        return Err(e);
    }
    Ok(VCategory::new(Lawvere, d.points.clone(), d.entries.clone())?)
}

/// A binary relation on points listed in order of first appearance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub points: Vec<String>,
    pub pairs: Vec<(usize, usize)>,
}

impl Relation {
    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.pairs.contains(&(a, b))
    }

    /// The relation as a matrix over `2`, without checking any axiom.
    pub fn to_category(&self) -> VCategory<FiniteQuantale> {
        VCategory::from_fn(two(), self.points.clone(), |a, b| usize::from(self.contains(a, b)))
            .expect("square by construction")
    }
}

/// One pair per line, written `a,b` or `(a,b)`; `#` starts a comment.
pub fn parse_relation(text: &str) -> Result<Relation, BridgeError> {
    let mut points: Vec<String> = Vec::new();
    let mut pairs = Vec::new();
    let index = |p: &str, points: &mut Vec<String>| match points.iter().position(|q| q == p) {
        Some(i) => i,
        None => {
            points.push(p.to_string());
            points.len() - 1
        }
    };
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let inner = line
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .unwrap_or(line);
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        if parts.len() != 2 || parts.iter().any(|s| s.is_empty()) {
            return Err(BridgeError::Syntax {
                line: i + 1,
                message: format!("expected a pair `a,b`, found `{line}`"),
            });
        }
        let a = index(parts[0], &mut points);
        let b = index(parts[1], &mut points);
        if !pairs.contains(&(a, b)) {
            pairs.push((a, b));
        }
    }
    Ok(Relation { points, pairs })
}

/// A preorder as a category over `2`.
pub fn preorder_bridge(r: &Relation) -> Result<VCategory<FiniteQuantale>, BridgeError> {
    let n = r.points.len();
    if let Some(x) = (0..n).find(|&x| !r.contains(x, x)) {
        return Err(BridgeError::NotReflexive(r.points[x].clone()));
    }
    for x in 0..n {
        for z in 0..n {
            for y in 0..n {
                if r.contains(x, z) && r.contains(z, y) && !r.contains(x, y) {
                    return Err(BridgeError::NotTransitive {
                        x: r.points[x].clone(),
                        z: r.points[z].clone(),
                        y: r.points[y].clone(),
                    });
                }
            }
        }
    }
    Ok(r.to_category())
}

/// A family `M(x, y, ·)` of step DDFs indexed by ordered pairs of points.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyMetricFamily {
    pub points: Vec<String>,
    pub tnorm: TNorm,
    pub entries: Vec<Vec<StepDdf>>,
}

impl FuzzyMetricFamily {
    /// Reads either a bare object `{"x,y": ddf, ...}` or
    /// `{"tnorm": ..., "points": [...], "entries": {"x,y": ddf, ...}}`.
    /// A DDF is inline JSON or a string naming a DDF file, resolved against
    /// `base`. Diagonal entries may be omitted and default to `f_01`.
    /// Values at infinity are replaced by the supremum of the finite values.
    pub fn from_json_str(text: &str, default_tnorm: TNorm, base: &Path) -> Result<Self, BridgeError> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| BridgeError::Json(e.to_string()))?;
        let obj = value
            .as_object()
            .ok_or_else(|| BridgeError::Json("a fuzzy family must be a JSON object".into()))?;
        let (tnorm, explicit_points, entries) = match obj.get("entries") {
            Some(entries) => {
                let tnorm = match obj.get("tnorm") {
                    Some(t) => t
                        .as_str()
                        .ok_or_else(|| BridgeError::Json("tnorm must be a string".into()))?
                        .parse::<TNorm>()
                        .map_err(|e| BridgeError::Json(e.to_string()))?,
                    None => default_tnorm,
                };
                let points = match obj.get("points") {
                    Some(p) => Some(
                        serde_json::from_value::<Vec<String>>(p.clone())
                            .map_err(|e| BridgeError::Json(format!("points: {e}")))?,
                    ),
                    None => None,
                };
                let entries = entries
                    .as_object()
                    .ok_or_else(|| BridgeError::Json("entries must be an object".into()))?;
                (tnorm, points, entries)
            }
            None => (default_tnorm, None, obj),
        };
        let mut table: BTreeMap<(String, String), StepDdf> = BTreeMap::new();
        let mut seen: Vec<String> = Vec::new();
        for (key, ddf) in entries {
            let (x, y) = key
                .split_once(',')
                .map(|(a, b)| (a.trim().to_string(), b.trim().to_string()))
                .ok_or_else(|| BridgeError::Json(format!("key `{key}` is not of the form \"x,y\"")))?;
            let f = load_ddf(ddf, base).map_err(|e| match e {
                LoadError::Ddf(d) => BridgeError::Ddf(x.clone(), y.clone(), d),
                LoadError::Io(path, message) => BridgeError::Io { path, message },
            })?;
            for p in [&x, &y] {
                if !seen.contains(p) {
                    seen.push(p.clone());
                }
            }
            table.insert((x, y), f);
        }
        let points = explicit_points.unwrap_or_else(|| {
            seen.sort();
            seen
        });
        let mut rows = Vec::with_capacity(points.len());
        for x in &points {
            let mut row = Vec::with_capacity(points.len());
            for y in &points {
                match table.remove(&(x.clone(), y.clone())) {
                    Some(f) => row.push(f),
                    None if x == y => row.push(StepDdf::unit()),
                    None => return Err(BridgeError::MissingEntry(x.clone(), y.clone())),
                }
            }
            rows.push(row);
        }
        if let Some(((x, y), _)) = table.into_iter().next() {
            return Err(BridgeError::Json(format!("entry ({x},{y}) names an unknown point")));
        }
        Ok(FuzzyMetricFamily {
            points,
            tnorm,
            entries: rows,
        })
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let mut entries = serde_json::Map::new();
        for (x, row) in self.points.iter().zip(&self.entries) {
            for (y, f) in self.points.iter().zip(row) {
                entries.insert(format!("{x},{y}"), f.to_json_value());
            }
        }
        serde_json::json!({
            "tnorm": self.tnorm.name(),
            "points": self.points,
            "entries": entries,
        })
    }

    pub fn from_category(c: &VCategory<DdfQuantale>) -> Self {
        FuzzyMetricFamily {
            points: c.points().to_vec(),
            tnorm: c.quantale.tnorm,
            entries: c.rows(),
        }
    }

    /// The first failure of the fuzzy quasi-pseudometric axioms, if any.
    pub fn fqpm_violation(&self) -> Option<BridgeError> {
        let n = self.points.len();
        let p = &self.points;
        for x in 0..n {
            if self.entries[x][x] != StepDdf::unit() {
                return Some(BridgeError::FuzzyDiagonal {
                    point: p[x].clone(),
                    found: self.entries[x][x].to_string(),
                });
            }
        }
        for x in 0..n {
            for z in 0..n {
                for y in 0..n {
                    let via = self.entries[x][z].convolve(&self.entries[z][y], self.tnorm);
                    let direct = &self.entries[x][y];
                    if let Some(t) = via.leq_witness(direct) {
                        return Some(BridgeError::FuzzyTriangle {
                            x: p[x].clone(),
                            z: p[z].clone(),
                            y: p[y].clone(),
                            t: fmt_rational(&t),
                            via: fmt_rational(&via.eval_at(&t)),
                            direct: fmt_rational(&direct.eval_at(&t)),
                        });
                    }
                }
            }
        }
        None
    }
}

enum LoadError {
    Ddf(DdfError),
    Io(String, String),
}

fn load_ddf(value: &serde_json::Value, base: &Path) -> Result<StepDdf, LoadError> {
    match value.as_str() {
        Some(name) => {
            let path = base.join(name);
            let text = std::fs::read_to_string(&path)
                .map_err(|e| LoadError::Io(path.display().to_string(), e.to_string()))?;
            StepDdf::from_json_str(&text, InfinityRule::Mate).map_err(LoadError::Ddf)
        }
        None => StepDdf::from_json_value(value, InfinityRule::Mate).map_err(LoadError::Ddf),
    }
}

/// A fuzzy quasi-pseudometric as a `Δ₊(∗)`-category.
pub fn fuzzy_bridge(m: &FuzzyMetricFamily) -> Result<VCategory<DdfQuantale>, BridgeError> {
    if let Some(e) = m.fqpm_violation() {
        return Err(e);
    }
    Ok(VCategory::new(
        DdfQuantale::new(m.tnorm),
        m.points.clone(),
        m.entries.clone(),
    )?)
}
