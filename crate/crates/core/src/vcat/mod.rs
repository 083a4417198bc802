//! Categories enriched over a quantale: a point set with a hom matrix
//! `a(x, y)` satisfying
//!
//! - VC1: `1 ⪯ a(x, x)`,
//! - VC2: `a(x, z) ∗ a(z, y) ⪯ a(x, y)`.

pub mod bridge;

use serde::Serialize;
use thiserror::Error;

use crate::quantale::{Product, Quantale};

pub use bridge::{
    parse_relation, preorder_bridge, qpm_bridge, fuzzy_bridge, BridgeError, DistanceMatrix,
    FuzzyMetricFamily, Relation,
};

/// Largest point count the product construction builds by default.
pub const DEFAULT_POINT_CAP: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VCatError {
    #[error("hom matrix has shape {rows}x{cols}, expected {n}x{n}")]
    Shape { rows: usize, cols: usize, n: usize },
    #[error("duplicate point label `{0}`")]
    DuplicatePoint(String),
    #[error("product would have {size} points, above the cap of {cap}")]
    TooLarge { size: usize, cap: usize },
    #[error("a product needs at least one factor")]
    Empty,
    #[error("point sets differ: factor {index} has {found:?}, expected {expected:?}")]
    PointMismatch {
        index: usize,
        expected: Vec<String>,
        found: Vec<String>,
    },
    #[error("coordinate {index} out of range for a product of {arity}")]
    Coordinate { index: usize, arity: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum VcAxiom {
    #[serde(rename = "VC1")]
    Vc1,
    #[serde(rename = "VC2")]
    Vc2,
}

/// A failed VC1 or VC2 instance. For VC1 `points = [x]`, `lhs` is the
/// unit and `rhs` is `a(x,x)`. For VC2 `points = [x, z, y]`, `lhs` is
/// `a(x,z) ∗ a(z,y)` and `rhs` is `a(x,y)`. In both cases `lhs ⪯ rhs`
/// is what failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VcViolation {
    pub axiom: VcAxiom,
    pub points: Vec<String>,
    pub indices: Vec<usize>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VCategory<Q: Quantale> {
    pub quantale: Q,
    points: Vec<String>,
    matrix: Vec<Q::Elem>,
}

impl<Q: Quantale> VCategory<Q> {
    pub fn new(quantale: Q, points: Vec<String>, rows: Vec<Vec<Q::Elem>>) -> Result<Self, VCatError> {
        let n = points.len();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(VCatError::Shape {
                rows: rows.len(),
                cols: rows.iter().map(Vec::len).find(|&l| l != n).unwrap_or(n),
                n,
            });
        }
        for (i, p) in points.iter().enumerate() {
            if points[..i].contains(p) {
                return Err(VCatError::DuplicatePoint(p.clone()));
            }
        }
        Ok(VCategory {
            quantale,
            points,
            matrix: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(
        quantale: Q,
        points: Vec<String>,
        mut hom: impl FnMut(usize, usize) -> Q::Elem,
    ) -> Result<Self, VCatError> {
        let n = points.len();
        let rows = (0..n).map(|i| (0..n).map(|j| hom(i, j)).collect()).collect();
        VCategory::new(quantale, points, rows)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn hom(&self, x: usize, y: usize) -> &Q::Elem {
        &self.matrix[x * self.len() + y]
    }

    pub fn rows(&self) -> Vec<Vec<Q::Elem>> {
        self.matrix.chunks(self.len().max(1)).map(<[_]>::to_vec).collect()
    }

    pub fn label_rows(&self) -> Vec<Vec<String>> {
        self.matrix
            .chunks(self.len().max(1))
            .map(|r| r.iter().map(|e| self.quantale.label(e)).collect())
            .collect()
    }

    /// Every VC1 and VC2 failure, VC1 first, then VC2 triples `(x, z, y)`
    /// in lexicographic order.
    pub fn violations(&self) -> Vec<VcViolation> {
        let mut out = self.vc1_violations();
        self.scan_vc2(|v| {
            out.push(v);
            true
        });
        out
    }

    pub fn first_violation(&self) -> Option<VcViolation> {
        if let Some(v) = self.vc1_violations().into_iter().next() {
            return Some(v);
        }
        let mut first = None;
        self.scan_vc2(|v| {
            first = Some(v);
            false
        });
        first
    }

    pub fn is_valid(&self) -> bool {
        self.first_violation().is_none()
    }

    fn vc1_violations(&self) -> Vec<VcViolation> {
        let q = &self.quantale;
        let unit = q.unit();
        (0..self.len())
            .filter(|&x| !q.leq(&unit, self.hom(x, x)))
            .map(|x| VcViolation {
                axiom: VcAxiom::Vc1,
                points: vec![self.points[x].clone()],
                indices: vec![x],
                lhs: q.label(&unit),
                rhs: q.label(self.hom(x, x)),
            })
            .collect()
    }

    /// Calls `sink` on each VC2 failure until it returns false.
    fn scan_vc2(&self, mut sink: impl FnMut(VcViolation) -> bool) {
        let q = &self.quantale;
        let n = self.len();
        for x in 0..n {
            for z in 0..n {
                for y in 0..n {
                    let lhs = q.tensor(self.hom(x, z), self.hom(z, y));
                    let rhs = self.hom(x, y);
                    if !q.leq(&lhs, rhs) {
                        let v = VcViolation {
                            axiom: VcAxiom::Vc2,
                            points: vec![
                                self.points[x].clone(),
                                self.points[z].clone(),
                                self.points[y].clone(),
                            ],
                            indices: vec![x, z, y],
                            lhs: q.label(&lhs),
                            rhs: q.label(rhs),
                        };
                        if !sink(v) {
                            return;
                        }
                    }
                }
            }
        }
    }

    /// A distinct pair with unit homs in both directions.
    pub fn separation_witness(&self) -> Option<(usize, usize)> {
        let q = &self.quantale;
        let n = self.len();
        (0..n)
            .flat_map(|x| (x + 1..n).map(move |y| (x, y)))
            .find(|&(x, y)| q.is_unit(self.hom(x, y)) && q.is_unit(self.hom(y, x)))
    }

    pub fn is_separated(&self) -> bool {
        self.separation_witness().is_none()
    }

    /// A pair with `a(x, y) ≠ a(y, x)`.
    pub fn symmetry_witness(&self) -> Option<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|x| (x + 1..n).map(move |y| (x, y)))
            .find(|&(x, y)| self.hom(x, y) != self.hom(y, x))
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetry_witness().is_none()
    }

    /// A pair `(x, y)` where `map` fails to be a V-functor into `other`,
    /// i.e. `a(x, y) ⋠ b(map x, map y)`.
    pub fn functor_witness(&self, other: &VCategory<Q>, map: &[usize]) -> Option<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .find(|&(x, y)| !self.quantale.leq(self.hom(x, y), other.hom(map[x], map[y])))
    }
}

/// Checks VC1 and VC2; the list is empty exactly when `c` is a V-category.
pub fn check_vcategory<Q: Quantale>(c: &VCategory<Q>) -> Vec<VcViolation> {
    c.violations()
}

/// `(X, F ∘ a)` together with its VC1/VC2 violations.
pub fn aggregate_category<V, W, E>(
    f: impl Fn(&V::Elem) -> Result<W::Elem, E>,
    c: &VCategory<V>,
    target: W,
) -> Result<(VCategory<W>, Vec<VcViolation>), E>
where
    V: Quantale,
    W: Quantale,
{
    let matrix = c.matrix.iter().map(&f).collect::<Result<Vec<_>, E>>()?;
    let out = VCategory {
        quantale: target,
        points: c.points.clone(),
        matrix,
    };
    let violations = out.violations();
    Ok((out, violations))
}

fn tuple_label(parts: &[&str]) -> String {
    format!("({})", parts.join(","))
}

/// Points are tuples `(xᵢ)ᵢ` and `a((xᵢ), (yᵢ)) = (aᵢ(xᵢ, yᵢ))ᵢ`. Tuples are
/// ordered with the first coordinate most significant.
pub fn product_category<Q: Quantale + Clone>(
    cs: &[VCategory<Q>],
    cap: usize,
) -> Result<VCategory<Product<Q>>, VCatError> {
    if cs.is_empty() {
        return Err(VCatError::Empty);
    }
    let size = cs
        .iter()
        .try_fold(1usize, |acc, c| acc.checked_mul(c.len()))
        .unwrap_or(usize::MAX);
    if size > cap {
        return Err(VCatError::TooLarge { size, cap });
    }
    let sizes: Vec<usize> = cs.iter().map(VCategory::len).collect();
    let decode = |mut i: usize| {
        let mut out = vec![0; sizes.len()];
        for (slot, &s) in out.iter_mut().zip(&sizes).rev() {
            *slot = i % s;
            i /= s;
        }
        out
    };
    let tuples: Vec<Vec<usize>> = (0..size).map(decode).collect();
    let points = tuples
        .iter()
        .map(|t| {
            let parts: Vec<&str> = t.iter().zip(cs).map(|(&i, c)| c.points[i].as_str()).collect();
            tuple_label(&parts)
        })
        .collect();
    let quantale = Product::new(cs.iter().map(|c| c.quantale.clone()).collect());
    VCategory::from_fn(quantale, points, |x, y| {
        cs.iter()
            .enumerate()
            .map(|(k, c)| c.hom(tuples[x][k], tuples[y][k]).clone())
            .collect()
    })
}

/// One point set, several hom matrices: `a(x, y) = (aᵢ(x, y))ᵢ`.
pub fn diagonal_category<Q: Quantale + Clone>(
    cs: &[VCategory<Q>],
) -> Result<VCategory<Product<Q>>, VCatError> {
    let first = cs.first().ok_or(VCatError::Empty)?;
    for (index, c) in cs.iter().enumerate() {
        if c.points != first.points {
            return Err(VCatError::PointMismatch {
                index,
                expected: first.points.clone(),
                found: c.points.clone(),
            });
        }
    }
    let quantale = Product::new(cs.iter().map(|c| c.quantale.clone()).collect());
    VCategory::from_fn(quantale, first.points.clone(), |x, y| {
        cs.iter().map(|c| c.hom(x, y).clone()).collect()
    })
}

/// The `index`-th coordinate of a category over a product quantale.
pub fn coordinate_category<Q: Quantale + Clone>(
    c: &VCategory<Product<Q>>,
    index: usize,
) -> Result<VCategory<Q>, VCatError> {
    let arity = c.quantale.arity();
    if index >= arity {
        return Err(VCatError::Coordinate { index, arity });
    }
    VCategory::from_fn(c.quantale.factors[index].clone(), c.points.clone(), |x, y| {
        c.hom(x, y)[index].clone()
    })
}
