//! Exact arithmetic: rationals, polynomials, rational functions, matrices and
//! truncated two-variable series.

pub mod matrix;
pub mod parse;
pub mod poly;
pub mod ratfunc;
pub mod series;

pub use num_rational::BigRational as Rational;

pub use matrix::{jacobian, jacobian_of_map, RatMatrix};
pub use parse::{parse_ratfunc, parse_with_names};
pub use poly::{gcd, rational_from, Monomial, Polynomial};
pub use ratfunc::RatFunc;
pub use series::UQSeries;
