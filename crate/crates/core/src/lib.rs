//! Exact commutative algebra for full Perazzo algebras.
//!
//! The crate builds the Perazzo form `F = sum x_i p_i(u)`, its annihilator
//! `Ann(F)`, the ideal of the double-point scheme `Z_F`, and computes graded
//! Betti tables three ways: an exact Koszul-homology oracle, closed-form
//! formulas, and a mapping cone over the doubling sequence.

pub mod closed_forms;
pub mod doubling;
pub mod error;
pub mod field;
pub mod form;
pub mod ideals;
pub mod inverse_system;
pub mod matrix;
pub mod resolution;
pub mod ring;

pub use error::AlgebraError;
pub use field::{Coefficients, Field, PrimeField, RationalField};
pub use form::Form;
pub use ideals::{GradedIdeal, HVector, HilbertFunction, HomogeneousIdeal, IntersectionIdeal};
pub use inverse_system::{Annihilator, PerazzoSpec};
pub use resolution::BettiTable;
pub use ring::{Monomial, PolyRing};
