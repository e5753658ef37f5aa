//! Sparse polynomials over exact coefficient fields, with Gröbner bases on top.

pub mod field;
pub mod groebner;
pub mod ideal;
pub mod poly;
pub mod text;

pub use field::{ComplexFloats, Field, FieldSpec, PrimeField, Rationals};
pub use groebner::{buchberger, is_reduced_groebner, normal_form, GbConfig, PairSelection};
pub use ideal::{fresh_var, Direction, Ideal, RadicalComparison};
pub use poly::{Monomial, MonomialOrder, Polynomial, Ring, Term};
