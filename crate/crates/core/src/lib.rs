//! Quantales, quantale-enriched categories, and aggregation functions
//! viewed as lax morphisms between quantales.
//!
//! The finite side ([`quantale::FiniteQuantale`]) is exact and exhaustive;
//! the continuous side ([`continuous`]) uses exact rationals and reports
//! sampled evidence as such.

pub mod builtin;
pub mod continuous;
pub mod morphisms;
pub mod numeric;
pub mod quantale;
pub mod sampling;
pub mod vcat;

pub use continuous::{DdfQuantale, Lawvere, StepDdf, TNorm, UnitInterval};
pub use numeric::{Ext, Rational};
pub use quantale::{FiniteQuantale, Quantale};
