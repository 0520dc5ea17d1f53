//! Exact arithmetic: number-field scalars, polynomials and polynomial
//! fractions in named parameters, plus floating evaluation for oracles.

mod field;
pub mod numeric;
mod parse;
mod poly;
mod ratexpr;
mod scalar;

pub use num_complex::Complex64;
pub use field::FieldSpec;
pub use numeric::{eval_numeric, Sampler};
pub use parse::{parse_expr, parse_with};
pub use poly::{Monomial, PolyExpr, Symbol};
pub use ratexpr::RatExpr;
pub use scalar::Scalar;

/// Arbitrary-precision rational number.
pub type Rational = num_rational::BigRational;
