//! Exact scalar and linear-algebra tower: rationals, sparse multivariate
//! polynomials, rational functions and dense matrices.

mod intmat;
mod matrix;
mod mpoly;
mod rat;
mod ratfunc;

pub use matrix::{mat_inverse, Field, QMatrix};
pub use mpoly::{MPoly, Monomial};
pub use rat::{ParseRatError, Rat};
pub use ratfunc::RatFunc;

/// Exact equality of rational functions by cross-multiplication.
pub fn ratfunc_equal(a: &RatFunc, b: &RatFunc) -> bool {
    a.equals(b)
}

/// Quotient-rule partial derivative in variable `var`.
pub fn partial_derivative(f: &RatFunc, var: usize) -> RatFunc {
    f.partial_derivative(var)
}
