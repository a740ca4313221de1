//! Exact arithmetic for Q(z), polynomials in `u1..ur` over Q(z), and
//! fractions whose denominators are products of powers of affine forms.

mod fraction;
mod parse;
mod poly;
mod scalar;

pub use fraction::{unit_expand, AffineForm, ArrangementFraction, POLE_TOLERANCE};
pub use parse::parse_polynomial;
pub use poly::{degree_of, Exponent, Polynomial};
pub use scalar::ScalarZ;

/// `homogeneous_component` as a free function, matching the other helpers.
pub fn homogeneous_component(p: &Polynomial, d: i64) -> Polynomial {
    p.homogeneous_component(d)
}
