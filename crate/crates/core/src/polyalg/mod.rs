//! Exact arithmetic kernel: rationals, sparse multivariate and dense
//! univariate polynomials, and number fields with dynamic evaluation.

mod multipoly;
mod numberfield;
mod unipoly;

pub use multipoly::{c, q, t, u, x, y, z, Monomial, MultiPoly, Var, NVARS};
pub use numberfield::{dynamic_eval, nf_invert, Dyn, DynResult, Inverse, NfPoly, NumberField, NumberFieldElement, Split};
pub use unipoly::UniPoly;

/// Arbitrary-precision rational, always kept in lowest terms.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}
