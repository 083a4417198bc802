use std::collections::HashSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use super::Quantale;
use crate::numeric::Ext;

/// Largest element count [`product_quantale`] builds unless told otherwise.
pub const DEFAULT_PRODUCT_CAP: usize = 1024;

/// Malformed input tables. Distinct from an axiom failure.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("a quantale needs at least one element")]
    Empty,
    #[error("duplicate element label `{0}`")]
    DuplicateLabel(String),
    #[error("order relation has shape {rows}x{cols}, expected {n}x{n}")]
    OrderShape { rows: usize, cols: usize, n: usize },
    #[error("tensor table has shape {rows}x{cols}, expected {n}x{n}")]
    TensorShape { rows: usize, cols: usize, n: usize },
    #[error("tensor entry ({row},{col}) = {value} is not an element index (n = {n})")]
    TensorIndex {
        row: usize,
        col: usize,
        value: usize,
        n: usize,
    },
    #[error("unit index {unit} out of range (n = {n})")]
    UnitIndex { unit: usize, n: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    Reflexivity,
    Antisymmetry,
    Transitivity,
    BottomExists,
    BinaryJoins,
    Commutativity,
    Associativity,
    UnitLaw,
    Distributivity,
    BottomAnnihilates,
    Integrality,
}

impl Axiom {
    pub fn name(self) -> &'static str {
        match self {
            Axiom::Reflexivity => "order reflexivity",
            Axiom::Antisymmetry => "order antisymmetry",
            Axiom::Transitivity => "order transitivity",
            Axiom::BottomExists => "bottom element",
            Axiom::BinaryJoins => "binary joins",
            Axiom::Commutativity => "commutativity",
            Axiom::Associativity => "associativity",
            Axiom::UnitLaw => "unit law",
            Axiom::Distributivity => "distributivity over joins",
            Axiom::BottomAnnihilates => "tensor with bottom",
            Axiom::Integrality => "integrality (unit is top)",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    /// Element indices exhibiting the failure.
    pub witness: Vec<usize>,
    /// Labels of `witness`, for display.
    pub labels: Vec<String>,
    pub detail: String,
}

/// Outcome of [`validate_finite_quantale`]: `passed` iff `violations` is empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub passed: bool,
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn violation(&self, axiom: Axiom) -> Option<&AxiomViolation> {
        self.violations.iter().find(|v| v.axiom == axiom)
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed {
            return writeln!(f, "valid commutative integral quantale");
        }
        writeln!(f, "not a commutative integral quantale:")?;
        for v in &self.violations {
            writeln!(f, "  {}: ({}) {}", v.axiom, v.labels.join(", "), v.detail)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuantaleError {
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("axioms violated: {}", .0.violations.iter().map(|v| v.axiom.name()).collect::<Vec<_>>().join(", "))]
    Axioms(AxiomReport),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProductError {
    #[error("product of an empty family")]
    Empty,
    #[error("product would have {size} elements, cap is {cap}")]
    TooLarge { size: usize, cap: usize },
}

/// How a numeric value is mapped back to an element of a one-dimensional
/// carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decode {
    /// The value must equal some element's coordinate.
    Exact,
    /// Values strictly above the cap collapse to `∞` (truncated Lawvere).
    CapToInfinity(Ext),
}

/// Numeric coordinates for the elements of a builtin finite quantale, so
/// that numeric aggregation rules can be tabulated on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumericEmbedding {
    pub coords: Vec<Vec<Ext>>,
    pub decode: Decode,
}

impl NumericEmbedding {
    pub fn scalar(values: Vec<Ext>, decode: Decode) -> Self {
        NumericEmbedding {
            coords: values.into_iter().map(|v| vec![v]).collect(),
            decode,
        }
    }

    pub fn dimension(&self) -> usize {
        self.coords.first().map_or(0, Vec::len)
    }

    /// Element whose single coordinate represents `value`.
    pub fn decode(&self, value: &Ext) -> Option<usize> {
        if self.dimension() != 1 {
            return None;
        }
        let target = match &self.decode {
            Decode::CapToInfinity(cap) if value > cap => Ext::Inf,
            _ => value.clone(),
        };
        self.coords.iter().position(|c| c[0] == target)
    }
}

/// A validated finite commutative integral quantale.
///
/// Elements are identified by index; labels are for display only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteQuantale {
    labels: Vec<String>,
    leq: Vec<bool>,
    tensor: Vec<usize>,
    join: Vec<usize>,
    unit: usize,
    bottom: usize,
    factor_sizes: Vec<usize>,
    embedding: Option<NumericEmbedding>,
}

struct Tables<'a> {
    n: usize,
    labels: &'a [String],
    leq: &'a [Vec<bool>],
    tensor: &'a [Vec<usize>],
    unit: usize,
}

impl Tables<'_> {
    fn le(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    fn t(&self, a: usize, b: usize) -> usize {
        self.tensor[a][b]
    }

    fn violation(&self, axiom: Axiom, witness: Vec<usize>, detail: String) -> AxiomViolation {
        let labels = witness.iter().map(|&i| self.labels[i].clone()).collect();
        AxiomViolation {
            axiom,
            witness,
            labels,
            detail,
        }
    }

    fn check_structure(&self) -> Result<(), StructureError> {
        let n = self.n;
        if n == 0 {
            return Err(StructureError::Empty);
        }
        let mut seen = HashSet::new();
        for l in self.labels {
            if !seen.insert(l.as_str()) {
                return Err(StructureError::DuplicateLabel(l.clone()));
            }
        }
        if self.leq.len() != n || self.leq.iter().any(|r| r.len() != n) {
            let cols = self.leq.iter().map(Vec::len).find(|&c| c != n).unwrap_or(n);
            return Err(StructureError::OrderShape {
                rows: self.leq.len(),
                cols,
                n,
            });
        }
        if self.tensor.len() != n || self.tensor.iter().any(|r| r.len() != n) {
            let cols = self
                .tensor
                .iter()
                .map(Vec::len)
                .find(|&c| c != n)
                .unwrap_or(n);
            return Err(StructureError::TensorShape {
                rows: self.tensor.len(),
                cols,
                n,
            });
        }
        for (row, r) in self.tensor.iter().enumerate() {
            for (col, &value) in r.iter().enumerate() {
                if value >= n {
                    return Err(StructureError::TensorIndex { row, col, value, n });
                }
            }
        }
        if self.unit >= n {
            return Err(StructureError::UnitIndex { unit: self.unit, n });
        }
        Ok(())
    }

    fn order_violations(&self, out: &mut Vec<AxiomViolation>) {
        let n = self.n;
        if let Some(x) = (0..n).find(|&x| !self.le(x, x)) {
            out.push(self.violation(Axiom::Reflexivity, vec![x], "x ⋠ x".into()));
        }
        'anti: for x in 0..n {
            for y in x + 1..n {
                if self.le(x, y) && self.le(y, x) {
                    out.push(self.violation(
                        Axiom::Antisymmetry,
                        vec![x, y],
                        "x ⪯ y and y ⪯ x with x ≠ y".into(),
                    ));
                    break 'anti;
                }
            }
        }
        'trans: for x in 0..n {
            for y in 0..n {
                if !self.le(x, y) {
                    continue;
                }
                for z in 0..n {
                    if self.le(y, z) && !self.le(x, z) {
                        out.push(self.violation(
                            Axiom::Transitivity,
                            vec![x, y, z],
                            "x ⪯ y ⪯ z but x ⋠ z".into(),
                        ));
                        break 'trans;
                    }
                }
            }
        }
    }

    fn find_bottom(&self) -> Option<usize> {
        (0..self.n).find(|&b| (0..self.n).all(|x| self.le(b, x)))
    }

    fn least_upper_bound(&self, x: usize, y: usize) -> Option<usize> {
        let ubs: Vec<usize> = (0..self.n)
            .filter(|&u| self.le(x, u) && self.le(y, u))
            .collect();
        ubs.iter()
            .copied()
            .find(|&u| ubs.iter().all(|&v| self.le(u, v)))
    }

    /// Lattice checks; returns the join table when the order is a finite
    /// complete lattice.
    fn lattice_violations(&self, out: &mut Vec<AxiomViolation>) -> Option<(usize, Vec<usize>)> {
        let n = self.n;
        let bottom = self.find_bottom();
        if bottom.is_none() {
            let minimal: Vec<usize> = (0..n)
                .filter(|&m| (0..n).all(|x| x == m || !self.le(x, m)))
                .take(2)
                .collect();
            out.push(self.violation(
                Axiom::BottomExists,
                minimal,
                "distinct minimal elements, so no least element".into(),
            ));
        }
        let mut join = vec![0; n * n];
        let mut ok = true;
        'pairs: for x in 0..n {
            for y in 0..n {
                match self.least_upper_bound(x, y) {
                    Some(j) => join[x * n + y] = j,
                    None => {
                        out.push(self.violation(
                            Axiom::BinaryJoins,
                            vec![x, y],
                            "no least upper bound".into(),
                        ));
                        ok = false;
                        break 'pairs;
                    }
                }
            }
        }
        match (bottom, ok) {
            (Some(b), true) => Some((b, join)),
            _ => None,
        }
    }

    fn algebra_violations(&self, out: &mut Vec<AxiomViolation>) {
        let n = self.n;
        'comm: for x in 0..n {
            for y in x + 1..n {
                if self.t(x, y) != self.t(y, x) {
                    let detail = format!(
                        "x∗y = {} but y∗x = {}",
                        self.labels[self.t(x, y)],
                        self.labels[self.t(y, x)]
                    );
                    out.push(self.violation(Axiom::Commutativity, vec![x, y], detail));
                    break 'comm;
                }
            }
        }
        'assoc: for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let l = self.t(self.t(x, y), z);
                    let r = self.t(x, self.t(y, z));
                    if l != r {
                        let detail = format!(
                            "(x∗y)∗z = {} but x∗(y∗z) = {}",
                            self.labels[l], self.labels[r]
                        );
                        out.push(self.violation(Axiom::Associativity, vec![x, y, z], detail));
                        break 'assoc;
                    }
                }
            }
        }
        let u = self.unit;
        if let Some(x) = (0..n).find(|&x| self.t(u, x) != x || self.t(x, u) != x) {
            let detail = format!(
                "1∗x = {}, x∗1 = {}",
                self.labels[self.t(u, x)],
                self.labels[self.t(x, u)]
            );
            out.push(self.violation(Axiom::UnitLaw, vec![u, x], detail));
        }
    }

    fn distributivity_violations(
        &self,
        bottom: usize,
        join: &[usize],
        out: &mut Vec<AxiomViolation>,
    ) {
        let n = self.n;
        let j = |a: usize, b: usize| join[a * n + b];
        'dist: for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let l = self.t(x, j(y, z));
                    let r = j(self.t(x, y), self.t(x, z));
                    let l2 = self.t(j(y, z), x);
                    let r2 = j(self.t(y, x), self.t(z, x));
                    if l != r || l2 != r2 {
                        let detail = if l != r {
                            format!(
                                "x∗(y∨z) = {} but (x∗y)∨(x∗z) = {}",
                                self.labels[l], self.labels[r]
                            )
                        } else {
                            format!(
                                "(y∨z)∗x = {} but (y∗x)∨(z∗x) = {}",
                                self.labels[l2], self.labels[r2]
                            )
                        };
                        out.push(self.violation(Axiom::Distributivity, vec![x, y, z], detail));
                        break 'dist;
                    }
                }
            }
        }
        if let Some(x) = (0..n).find(|&x| self.t(x, bottom) != bottom || self.t(bottom, x) != bottom)
        {
            let detail = format!("x∗⊥ = {}", self.labels[self.t(x, bottom)]);
            out.push(self.violation(Axiom::BottomAnnihilates, vec![x, bottom], detail));
        }
    }

    fn integrality_violations(&self, out: &mut Vec<AxiomViolation>) {
        if let Some(x) = (0..self.n).find(|&x| !self.le(x, self.unit)) {
            out.push(self.violation(
                Axiom::Integrality,
                vec![x, self.unit],
                "x ⋠ 1, so the unit is not the top element".into(),
            ));
        }
    }
}

/// Checks every quantale axiom exhaustively and reports the first witness
/// for each violated axiom. Malformed tables are a [`StructureError`].
pub fn validate_finite_quantale(
    labels: &[String],
    leq: &[Vec<bool>],
    tensor: &[Vec<usize>],
    unit: usize,
) -> Result<AxiomReport, StructureError> {
    let tables = Tables {
        n: labels.len(),
        labels,
        leq,
        tensor,
        unit,
    };
    tables.check_structure()?;
    let mut violations = Vec::new();
    tables.order_violations(&mut violations);
    let order_ok = violations.is_empty();
    let lattice = if order_ok {
        tables.lattice_violations(&mut violations)
    } else {
        None
    };
    tables.algebra_violations(&mut violations);
    if let Some((bottom, join)) = &lattice {
        tables.distributivity_violations(*bottom, join, &mut violations);
    }
    if order_ok {
        tables.integrality_violations(&mut violations);
    }
    Ok(AxiomReport {
        passed: violations.is_empty(),
        violations,
    })
}

impl FiniteQuantale {
    /// Validates the tables and builds the quantale.
    pub fn new(
        labels: Vec<String>,
        leq: Vec<Vec<bool>>,
        tensor: Vec<Vec<usize>>,
        unit: usize,
    ) -> Result<Self, QuantaleError> {
        let report = validate_finite_quantale(&labels, &leq, &tensor, unit)?;
        if !report.passed {
            return Err(QuantaleError::Axioms(report));
        }
        let n = labels.len();
        let tables = Tables {
            n,
            labels: &labels,
            leq: &leq,
            tensor: &tensor,
            unit,
        };
        let mut scratch = Vec::new();
        let (bottom, join) = tables
            .lattice_violations(&mut scratch)
            .expect("validated order is a lattice");
        Ok(FiniteQuantale {
            leq: leq.concat(),
            tensor: tensor.concat(),
            join,
            unit,
            bottom,
            factor_sizes: vec![n],
            embedding: None,
            labels,
        })
    }

    /// Builds a quantale from a total order given as a ranking
    /// (`rank[i] < rank[j]` means `i` is strictly below `j`) and a tensor
    /// function on indices.
    pub(crate) fn from_chain(
        labels: Vec<String>,
        tensor: impl Fn(usize, usize) -> usize,
        unit: usize,
    ) -> Result<Self, QuantaleError> {
        let n = labels.len();
        let leq = (0..n).map(|a| (0..n).map(|b| a <= b).collect()).collect();
        let table = (0..n).map(|a| (0..n).map(|b| tensor(a, b)).collect()).collect();
        FiniteQuantale::new(labels, leq, table, unit)
    }

    pub fn with_embedding(mut self, embedding: NumericEmbedding) -> Self {
        assert_eq!(embedding.coords.len(), self.len());
        self.embedding = Some(embedding);
        self
    }

    pub fn embedding(&self) -> Option<&NumericEmbedding> {
        self.embedding.as_ref()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_of(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn leq_idx(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.len() + b]
    }

    pub fn tensor_idx(&self, a: usize, b: usize) -> usize {
        self.tensor[a * self.len() + b]
    }

    pub fn join_idx(&self, a: usize, b: usize) -> usize {
        self.join[a * self.len() + b]
    }

    pub fn unit_index(&self) -> usize {
        self.unit
    }

    pub fn bottom_index(&self) -> usize {
        self.bottom
    }

    /// Least upper bound of a set of element indices; `⊥` for the empty set.
    pub fn sup_of(&self, set: &[usize]) -> usize {
        set.iter().fold(self.bottom, |acc, &x| self.join_idx(acc, x))
    }

    /// Order relation as a square matrix.
    pub fn leq_matrix(&self) -> Vec<Vec<bool>> {
        self.leq.chunks(self.len()).map(<[bool]>::to_vec).collect()
    }

    pub fn tensor_matrix(&self) -> Vec<Vec<usize>> {
        self.tensor.chunks(self.len()).map(<[usize]>::to_vec).collect()
    }

    /// Sizes of the factors when this quantale was built as a product.
    pub fn factor_sizes(&self) -> &[usize] {
        &self.factor_sizes
    }

    /// Factor indices of element `i` (a one-element vector for non-products).
    pub fn coords(&self, mut i: usize) -> Vec<usize> {
        let mut out = vec![0; self.factor_sizes.len()];
        for (slot, &size) in out.iter_mut().zip(&self.factor_sizes).rev() {
            *slot = i % size;
            i /= size;
        }
        out
    }

    /// Inverse of [`coords`](Self::coords).
    pub fn index_of_coords(&self, coords: &[usize]) -> usize {
        coords
            .iter()
            .zip(&self.factor_sizes)
            .fold(0, |acc, (&c, &size)| acc * size + c)
    }

    /// Replaces a single tensor entry without re-validating; used for
    /// mutation sweeps over raw tables.
    pub fn tensor_with_entry(&self, a: usize, b: usize, value: usize) -> Vec<Vec<usize>> {
        let mut t = self.tensor_matrix();
        t[a][b] = value;
        t
    }
}

impl Quantale for FiniteQuantale {
    type Elem = usize;

    fn leq(&self, a: &usize, b: &usize) -> bool {
        self.leq_idx(*a, *b)
    }

    fn tensor(&self, a: &usize, b: &usize) -> usize {
        self.tensor_idx(*a, *b)
    }

    fn unit(&self) -> usize {
        self.unit
    }

    fn bottom(&self) -> usize {
        self.bottom
    }

    fn join(&self, a: &usize, b: &usize) -> usize {
        self.join_idx(*a, *b)
    }

    fn label(&self, a: &usize) -> String {
        self.labels[*a].clone()
    }
}

fn labels_of(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// The two-element quantale `{0, 1}`; every t-norm restricts to `min` here.
pub fn two() -> FiniteQuantale {
    FiniteQuantale::from_chain(labels_of(&["0", "1"]), |a, b| a.min(b), 1)
        .expect("two-element quantale is valid")
        .with_embedding(NumericEmbedding::scalar(
            vec![Ext::zero(), Ext::from_int(1)],
            Decode::Exact,
        ))
}

/// The chain `0 < 1 < … < n-1` with `min` as tensor.
pub fn chain(n: usize) -> FiniteQuantale {
    assert!(n >= 1, "chain needs at least one element");
    let labels = (0..n).map(|i| i.to_string()).collect();
    FiniteQuantale::from_chain(labels, |a, b| a.min(b), n - 1).expect("min on a chain is valid")
}

/// The chain `⊥ ⪯ x ⪯ ⊤` with `u∗v = u∧v` when either side is `⊤` and `⊥`
/// otherwise. Labels are `bot`, `x`, `top` (indices 0, 1, 2).
pub fn three_nilpotent() -> FiniteQuantale {
    FiniteQuantale::from_chain(
        labels_of(&["bot", "x", "top"]),
        |a, b| if a == 2 || b == 2 { a.min(b) } else { 0 },
        2,
    )
    .expect("three-element quantale is valid")
}

/// Componentwise product of finite quantales. Element order is
/// lexicographic in the factor indices, first factor most significant.
pub fn product_quantale(
    factors: &[FiniteQuantale],
    cap: usize,
) -> Result<FiniteQuantale, ProductError> {
    if factors.is_empty() {
        return Err(ProductError::Empty);
    }
    let size = factors
        .iter()
        .try_fold(1usize, |acc, q| acc.checked_mul(q.len()))
        .unwrap_or(usize::MAX);
    if size > cap {
        return Err(ProductError::TooLarge { size, cap });
    }
    let top_sizes: Vec<usize> = factors.iter().map(FiniteQuantale::len).collect();
    let shape = FiniteQuantale {
        labels: Vec::new(),
        leq: Vec::new(),
        tensor: Vec::new(),
        join: Vec::new(),
        unit: 0,
        bottom: 0,
        factor_sizes: top_sizes,
        embedding: None,
    };
    let tuples: Vec<Vec<usize>> = (0..size).map(|i| shape.coords(i)).collect();
    let combine = |a: &[usize], b: &[usize], op: &dyn Fn(&FiniteQuantale, usize, usize) -> usize| {
        let c: Vec<usize> = factors
            .iter()
            .zip(a.iter().zip(b))
            .map(|(q, (&x, &y))| op(q, x, y))
            .collect();
        shape.index_of_coords(&c)
    };
    let mut leq = Vec::with_capacity(size * size);
    let mut tensor = Vec::with_capacity(size * size);
    let mut join = Vec::with_capacity(size * size);
    for a in &tuples {
        for b in &tuples {
            leq.push(
                factors
                    .iter()
                    .zip(a.iter().zip(b))
                    .all(|(q, (&x, &y))| q.leq_idx(x, y)),
            );
            tensor.push(combine(a, b, &|q, x, y| q.tensor_idx(x, y)));
            join.push(combine(a, b, &|q, x, y| q.join_idx(x, y)));
        }
    }
    let labels = tuples
        .iter()
        .map(|t| {
            let parts: Vec<&str> = factors
                .iter()
                .zip(t)
                .map(|(q, &x)| q.label_of(x))
                .collect();
            format!("({})", parts.join(","))
        })
        .collect();
    let units: Vec<usize> = factors.iter().map(FiniteQuantale::unit_index).collect();
    let bottoms: Vec<usize> = factors.iter().map(FiniteQuantale::bottom_index).collect();
    let embedding = factors
        .iter()
        .map(FiniteQuantale::embedding)
        .collect::<Option<Vec<_>>>()
        .map(|embs| NumericEmbedding {
            coords: tuples
                .iter()
                .map(|t| {
                    embs.iter()
                        .zip(t)
                        .flat_map(|(e, &x)| e.coords[x].iter().cloned())
                        .collect()
                })
                .collect(),
            decode: Decode::Exact,
        });
    Ok(FiniteQuantale {
        labels,
        leq,
        tensor,
        join,
        unit: shape.index_of_coords(&units),
        bottom: shape.index_of_coords(&bottoms),
        factor_sizes: factors.iter().map(FiniteQuantale::len).collect(),
        embedding,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(q: &FiniteQuantale) -> (Vec<String>, Vec<Vec<bool>>, Vec<Vec<usize>>, usize) {
        (
            q.labels().to_vec(),
            q.leq_matrix(),
            q.tensor_matrix(),
            q.unit_index(),
        )
    }

    #[test]
    fn builtin_examples_validate() {
        for q in [two(), three_nilpotent(), chain(1), chain(4)] {
            let (l, o, t, u) = raw(&q);
            let report = validate_finite_quantale(&l, &o, &t, u).unwrap();
            assert!(report.passed, "{report}");
        }
    }

    #[test]
    fn tensor_lookups_on_three_element_quantale() {
        let q = three_nilpotent();
        let (bot, x, top) = (0, 1, 2);
        assert_eq!(q.tensor_idx(x, x), bot);
        assert_eq!(q.tensor_idx(top, x), x);
        for u in q.elements() {
            assert_eq!(q.tensor_idx(q.unit_index(), u), u);
        }
        assert!(q.leq_idx(bot, x) && q.leq_idx(x, top) && !q.leq_idx(top, x));
    }

    #[test]
    fn x_times_x_equal_x_gives_the_min_chain() {
        // Raising x∗x from ⊥ to x turns the table into `min` on a 3-chain.
        let q = three_nilpotent();
        let t = q.tensor_with_entry(1, 1, 1);
        let report = validate_finite_quantale(q.labels(), &q.leq_matrix(), &t, 2).unwrap();
        assert!(report.passed);
        assert_eq!(t, chain(3).tensor_matrix());
    }

    #[test]
    fn x_times_x_equal_top_is_rejected_with_witnesses() {
        let q = three_nilpotent();
        let t = q.tensor_with_entry(1, 1, 2);
        let report = validate_finite_quantale(q.labels(), &q.leq_matrix(), &t, 2).unwrap();
        assert!(!report.passed);
        let dist = report.violation(Axiom::Distributivity).expect("distributivity fails");
        // x∗(x∨⊤) = x∗⊤ = x, but (x∗x)∨(x∗⊤) = ⊤∨x = ⊤.
        assert_eq!(dist.labels, vec!["x", "x", "top"]);
    }

    #[test]
    fn structural_errors_are_distinct_from_axiom_failures() {
        let labels = labels_of(&["a", "b"]);
        let leq = vec![vec![true, true], vec![false, true]];
        assert!(matches!(
            validate_finite_quantale(&labels, &leq, &[vec![0, 0]], 1),
            Err(StructureError::TensorShape { .. })
        ));
        assert!(matches!(
            validate_finite_quantale(&labels, &leq, &[vec![0, 0], vec![0, 5]], 1),
            Err(StructureError::TensorIndex { value: 5, .. })
        ));
        assert!(matches!(
            validate_finite_quantale(&labels, &leq[..1], &[vec![0, 0], vec![0, 1]], 1),
            Err(StructureError::OrderShape { .. })
        ));
        assert!(matches!(
            validate_finite_quantale(&labels, &leq, &[vec![0, 0], vec![0, 1]], 2),
            Err(StructureError::UnitIndex { .. })
        ));
        assert!(matches!(
            validate_finite_quantale(&[], &[], &[], 0),
            Err(StructureError::Empty)
        ));
        let dup = labels_of(&["a", "a"]);
        assert!(matches!(
            validate_finite_quantale(&dup, &leq, &[vec![0, 0], vec![0, 1]], 1),
            Err(StructureError::DuplicateLabel(_))
        ));
    }

    #[test]
    fn antisymmetry_is_an_order_error() {
        let labels = labels_of(&["a", "b"]);
        let leq = vec![vec![true, true], vec![true, true]];
        let report =
            validate_finite_quantale(&labels, &leq, &[vec![0, 0], vec![0, 1]], 1).unwrap();
        assert_eq!(report.violations[0].axiom, Axiom::Antisymmetry);
        assert!(report.violation(Axiom::BinaryJoins).is_none());
    }

    #[test]
    fn non_integral_and_non_commutative_tables_are_rejected() {
        // unit 0 is the bottom of the chain 0 < 1.
        let labels = labels_of(&["0", "1"]);
        let leq = vec![vec![true, true], vec![false, true]];
        let report =
            validate_finite_quantale(&labels, &leq, &[vec![0, 1], vec![1, 1]], 0).unwrap();
        assert_eq!(report.violation(Axiom::Integrality).unwrap().labels, vec!["1", "0"]);

        let t = three_nilpotent().tensor_with_entry(0, 1, 1);
        let report =
            validate_finite_quantale(three_nilpotent().labels(), &three_nilpotent().leq_matrix(), &t, 2)
                .unwrap();
        assert!(report.violation(Axiom::Commutativity).is_some());
    }

    #[test]
    fn missing_join_is_reported() {
        // a, b incomparable with no top: V shape.
        let labels = labels_of(&["bot", "a", "b"]);
        let leq = vec![
            vec![true, true, true],
            vec![false, true, false],
            vec![false, false, true],
        ];
        let t = vec![vec![0; 3]; 3];
        let report = validate_finite_quantale(&labels, &leq, &t, 1).unwrap();
        let v = report.violation(Axiom::BinaryJoins).unwrap();
        assert_eq!(v.labels, vec!["a", "b"]);
    }

    #[test]
    fn product_of_two_and_two() {
        let p = product_quantale(&[two(), two()], DEFAULT_PRODUCT_CAP).unwrap();
        assert_eq!(p.len(), 4);
        assert_eq!(p.label_of(p.unit_index()), "(1,1)");
        assert_eq!(p.label_of(p.bottom_index()), "(0,0)");
        let (l, o, t, u) = raw(&p);
        assert!(validate_finite_quantale(&l, &o, &t, u).unwrap().passed);
    }

    #[test]
    fn product_tensor_is_componentwise() {
        let a = three_nilpotent();
        let b = chain(3);
        let p = product_quantale(&[a.clone(), b.clone()], DEFAULT_PRODUCT_CAP).unwrap();
        for i in p.elements() {
            for j in p.elements() {
                let (ci, cj) = (p.coords(i), p.coords(j));
                let expect = vec![a.tensor_idx(ci[0], cj[0]), b.tensor_idx(ci[1], cj[1])];
                assert_eq!(p.coords(p.tensor_idx(i, j)), expect);
            }
        }
    }

    #[test]
    fn unary_product_is_a_copy() {
        let q = three_nilpotent();
        let p = product_quantale(&[q.clone()], DEFAULT_PRODUCT_CAP).unwrap();
        assert_eq!(p.len(), q.len());
        assert_eq!(p.tensor_matrix(), q.tensor_matrix());
        assert_eq!(p.leq_matrix(), q.leq_matrix());
        assert_eq!(p.label_of(1), "(x)");
    }

    #[test]
    fn product_cap_is_enforced() {
        let err = product_quantale(&[chain(10), chain(10)], 50).unwrap_err();
        assert_eq!(err, ProductError::TooLarge { size: 100, cap: 50 });
        assert_eq!(product_quantale(&[], 10).unwrap_err(), ProductError::Empty);
    }
}
