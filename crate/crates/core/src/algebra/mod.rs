//! Exact arithmetic: rationals, finite fields, polynomials and rational
//! functions over F_q, and the places of F_q(t).

pub mod error;
pub mod field;
pub mod parse;
pub mod place;
pub mod poly;
pub mod ratfunc;
pub mod rational;

pub use error::AlgebraError;
pub use field::{make_field, make_field_capped, Elem, FieldDescriptor};
pub use parse::parse_expr;
pub use place::{bad_places, factor_monic, place_valuation, Place};
pub use poly::Poly;
pub use ratfunc::RationalFunction;
pub use rational::{q, qi, ExactRational, Val, Valuation};
