//! Commutative integral quantales.
//!
//! [`Quantale`] is the interface the rest of the crate is written against.
//! [`FiniteQuantale`] is the table-backed carrier that every exhaustive
//! check runs on; it can only be obtained through validation, so holding
//! one means every axiom has been checked.

mod file;
mod finite;

pub use file::{
    parse_quantale_file, parse_raw_quantale, render_quantale_file, QuantaleFileError, RawQuantale,
};
pub use finite::{
    chain, product_quantale, three_nilpotent, two, validate_finite_quantale, Axiom, AxiomReport,
    AxiomViolation, Decode, FiniteQuantale, NumericEmbedding, ProductError, QuantaleError,
    StructureError, DEFAULT_PRODUCT_CAP,
};

use std::fmt::Debug;

/// A commutative integral quantale presented through its order and tensor.
pub trait Quantale {
    type Elem: Clone + PartialEq + Debug;

    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool;
    fn tensor(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Tensor unit, which is also the top element.
    fn unit(&self) -> Self::Elem;
    fn bottom(&self) -> Self::Elem;
    fn join(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn label(&self, a: &Self::Elem) -> String;

    fn sup<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        items
            .into_iter()
            .fold(self.bottom(), |acc, x| self.join(&acc, x))
    }

    fn is_unit(&self, a: &Self::Elem) -> bool {
        *a == self.unit()
    }

    /// Extra detail on why `a ⪯ b` fails, when labels alone do not show it.
    fn explain_not_leq(&self, _a: &Self::Elem, _b: &Self::Elem) -> Option<String> {
        None
    }
}

/// Componentwise product `Q₁ × … × Qₖ` of quantales of one type.
#[derive(Debug, Clone, PartialEq)]
pub struct Product<Q> {
    pub factors: Vec<Q>,
}

impl<Q> Product<Q> {
    pub fn new(factors: Vec<Q>) -> Self {
        Product { factors }
    }

    pub fn power(q: Q, k: usize) -> Self
    where
        Q: Clone,
    {
        Product {
            factors: vec![q; k],
        }
    }

    pub fn arity(&self) -> usize {
        self.factors.len()
    }
}

impl<Q: Quantale> Quantale for Product<Q> {
    type Elem = Vec<Q::Elem>;

    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.factors
            .iter()
            .zip(a.iter().zip(b))
            .all(|(q, (x, y))| q.leq(x, y))
    }

    fn tensor(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.factors
            .iter()
            .zip(a.iter().zip(b))
            .map(|(q, (x, y))| q.tensor(x, y))
            .collect()
    }

    fn unit(&self) -> Self::Elem {
        self.factors.iter().map(Quantale::unit).collect()
    }

    fn bottom(&self) -> Self::Elem {
        self.factors.iter().map(Quantale::bottom).collect()
    }

    fn join(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.factors
            .iter()
            .zip(a.iter().zip(b))
            .map(|(q, (x, y))| q.join(x, y))
            .collect()
    }

    fn label(&self, a: &Self::Elem) -> String {
        let parts: Vec<String> = self
            .factors
            .iter()
            .zip(a)
            .map(|(q, x)| q.label(x))
            .collect();
        format!("({})", parts.join(","))
    }

    fn explain_not_leq(&self, a: &Self::Elem, b: &Self::Elem) -> Option<String> {
        let (i, q, x, y) = self
            .factors
            .iter()
            .zip(a.iter().zip(b))
            .enumerate()
            .map(|(i, (q, (x, y)))| (i, q, x, y))
            .find(|(_, q, x, y)| !q.leq(x, y))?;
        let inner = q
            .explain_not_leq(x, y)
            .unwrap_or_else(|| format!("{} ⋠ {}", q.label(x), q.label(y)));
        Some(format!("coordinate {}: {}", i + 1, inner))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sup_of_empty_set_is_bottom() {
        let q = three_nilpotent();
        assert_eq!(q.sup_of(&[]), q.bottom_index());
        assert_eq!(Quantale::sup(&q, []), q.bottom_index());
    }

    #[test]
    fn sup_examples_on_three_element_quantale() {
        let q = three_nilpotent();
        let (bot, x, top) = (0, 1, 2);
        assert_eq!(q.sup_of(&[x, top]), top);
        assert_eq!(q.sup_of(&[x]), x);
        assert_eq!(q.sup_of(&[bot, x]), x);
    }

    #[test]
    fn generic_product_agrees_with_table_product() {
        let a = three_nilpotent();
        let b = two();
        let table = product_quantale(&[a.clone(), b.clone()], DEFAULT_PRODUCT_CAP).unwrap();
        let generic = Product::new(vec![a.clone(), b.clone()]);
        for i in 0..table.len() {
            for j in 0..table.len() {
                let (ei, ej) = (table.coords(i), table.coords(j));
                assert_eq!(generic.leq(&ei, &ej), table.leq_idx(i, j));
                assert_eq!(table.coords(table.tensor_idx(i, j)), generic.tensor(&ei, &ej));
            }
        }
        assert_eq!(table.coords(table.unit_index()), generic.unit());
    }
}
