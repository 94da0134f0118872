//! Exact and asymptotic evaluation of the triangular emptiness formation
//! probability (TDEFP) of the free-fermion six-vertex model with domain wall
//! boundary conditions.
//!
//! Equivalently, this computes the partition function of domino tilings of
//! an Aztec diamond of order `r + s` with a triangular corner of size `s`
//! removed (a pentagonal domain).
//!
//! The crate is layered bottom-up:
//!
//! - [`exact`]: rationals, polynomials in `α`, exact and multi-precision
//!   determinants.
//! - [`oracle`]: brute-force enumeration of six-vertex configurations, the
//!   ground truth for every finite-size formula.
//! - [`gefp`]: determinant and sum formulas for the generalized and
//!   triangular emptiness formation probabilities.
//! - [`asymptotics`]: closed forms of the scaling limit (log-gas free energy,
//!   resolvents, band endpoints, the third-order transition).
//! - [`convergence`]: finite-size scaling tables against the scaling limit.
//! - [`selftest`]: the invariant suites, runnable outside `cargo test`.

pub mod asymptotics;
pub mod convergence;
mod error;
pub mod exact;
pub mod gefp;
pub mod oracle;
pub mod selftest;

pub use error::{Error, Result};
pub use exact::{BigFloat, BigRational};
