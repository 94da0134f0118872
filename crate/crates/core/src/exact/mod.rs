//! Exact arithmetic substrate: rationals, polynomials in `α`, binomials,
//! determinants, and a small multi-precision binary float.

mod bigfloat;
mod binomial;
mod det;
mod matrix;
mod poly;
mod rational;

pub use bigfloat::BigFloat;
pub use binomial::{binomial_big, factorial, multiset};
pub use det::{det_cofactor, det_exact, det_float, det_float_estimate, FloatDet};
pub use matrix::Matrix;
pub use poly::{p_poly, p_poly_by_residues, AlphaPoly, Degree};
pub use rational::{
    format_sci, ln_abs, parse_fraction, powi, ratio, sqrt_exact, to_f64, BigRational,
    ParsedNumber,
};
