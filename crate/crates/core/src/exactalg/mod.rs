//! Exact scalar arithmetic and dense linear algebra.

pub mod field;
pub mod matrix;
pub mod poly;

pub use field::{is_prime, Field, FieldSpec, PrimeField, Rationals};
pub use matrix::{row_reduce, EchelonBasis, ExactMatrix};
pub use poly::{det_poly, monomial_count, monomial_index, monomials_below, Exponent, TruncatedPoly};
